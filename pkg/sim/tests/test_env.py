import math

import numpy as np
import pytest

from sim.demos import chunk_windows, run_expert_episode
from sim.env import is_success, reset, step
from sim.exceptions import InvalidState
from sim.expert import scripted_expert
from sim.models import MAX_DELTA, SimAction, SimObject, SimState, Target, TaskKind
from sim.observations import ACTION_DIM, CONTEXT_DIM, STATE_DIM, observe
from sim.tasks import get_task, load_tasks


def cube(pos, held=False, id="obj0"):
    return SimObject(id, "green cube", pos, 0.04, held)


def reference_success(state, task):
    """Declarative success: the relevant object rests within the tolerance."""
    if task.kind is TaskKind.REACH:
        (tx, ty), r = state.targets[0].pos, state.targets[0].radius
        gx, gy = state.gripper
        return (gx - tx) ** 2 + (gy - ty) ** 2 <= r**2
    if task.kind is TaskKind.PICK_PLACE:
        (ox, oy), (tx, ty) = state.objects[0].pos, state.targets[0].pos
        r = state.targets[0].radius
        return not state.objects[0].held and (ox - tx) ** 2 + (oy - ty) ** 2 <= r**2
    top, base = state.objects
    d2 = (top.pos[0] - base.pos[0]) ** 2 + (top.pos[1] - base.pos[1]) ** 2
    return not top.held and not base.held and d2 <= task.target_radius**2


def test_bundled_tasks():
    tasks = load_tasks()
    assert sorted(tasks) == ["pick_place", "reach", "stack"]
    assert tasks["stack"].objects == 2
    assert tasks["pick_place"].target_name == "plate"


@pytest.mark.parametrize(
    "gripper,objects",
    [
        ((1.2, 0.5), ()),
        ((0.5, 0.5), (cube((0.5, -0.1)),)),
        ((0.5, 0.5), (cube((0.5, 0.5), held=True), cube((0.5, 0.5), held=True, id="obj1"))),
        ((0.5, 0.5), (cube((0.6, 0.5), held=True),)),
    ],
)
def test_impossible_states_are_rejected(gripper, objects):
    with pytest.raises(InvalidState):
        SimState(gripper, True, objects)


def test_zero_action_keeps_state():
    state = SimState((0.3, 0.4), False, (cube((0.6, 0.6)),), (Target("plate", (0.2, 0.2), 0.06),))
    assert step(state, SimAction(0.0, 0.0, 0.0)) == state


def test_close_with_nothing_in_range():
    state = SimState((0.3, 0.4), False, (cube((0.6, 0.6)),))
    after = step(state, SimAction(0.0, 0.0, 1.0))
    assert after.grip_closed is True
    assert after.held is None


def test_grab_carry_release():
    state = SimState((0.5, 0.5), False, (cube((0.52, 0.5)),))
    state = step(state, SimAction(0.02, 0.0, 1.0))
    assert state.held is not None and state.held.pos == state.gripper
    state = step(state, SimAction(0.0, 0.05, 0.0))
    carried_to = state.gripper
    assert state.objects[0].pos == carried_to
    assert carried_to[1] == pytest.approx(0.55)
    state = step(state, SimAction(0.0, 0.0, -1.0))
    assert not state.grip_closed and state.held is None
    assert state.objects[0].pos == carried_to


def test_actions_are_clipped_and_gripper_stays_in_workspace():
    state = SimState((0.99, 0.01), False)
    after = step(state, SimAction(1.0, -1.0, 0.0))
    assert after.gripper == (1.0, 0.0)
    after = step(SimState((0.5, 0.5), False), SimAction(0.3, -0.3, 0.0))
    assert after.gripper == pytest.approx((0.5 + MAX_DELTA, 0.5 - MAX_DELTA))


def test_step_is_pure():
    task = get_task("pick_place")
    rng = np.random.default_rng(0)
    for _ in range(50):
        state = reset(task, rng)
        action = SimAction(*rng.uniform(-0.1, 0.1, size=2), float(rng.uniform(-1, 1)))
        assert step(state, action) == step(state, action)
        assert step(SimState.from_json(state.to_json()), action) == step(state, action)


@pytest.mark.parametrize("name, episodes", [("reach", 100), ("pick_place", 200), ("stack", 100)])
def test_expert_always_succeeds(name, episodes):
    task = get_task(name)
    for seed in range(episodes):
        record = run_expert_episode(task, np.random.default_rng(seed))
        assert record.success, (name, seed)
        assert record.steps_used <= task.max_steps
        assert len(record.actions) == len(record.states) - 1
        assert reference_success(record.states[-1], task)
        for action in record.actions:
            assert abs(action.dx) <= MAX_DELTA and abs(action.dy) <= MAX_DELTA


def test_expert_at_goal_is_still():
    task = get_task("reach")
    state = SimState((0.4, 0.4), False, (), (Target("marker", (0.4, 0.4), 0.05),))
    action = scripted_expert(state, task).action
    assert math.hypot(action.dx, action.dy) < 1e-12


def test_success_matches_reference_on_random_states():
    rng = np.random.default_rng(1)
    for name in ("reach", "pick_place", "stack"):
        task = get_task(name)
        for _ in range(300):
            state = reset(task, rng)
            for _ in range(int(rng.integers(0, 30))):
                state = step(state, SimAction(*rng.uniform(-0.05, 0.05, 2), float(rng.choice([-1, 0, 1]))))
            assert is_success(state, task) == reference_success(state, task)


def test_observation_layout():
    task = get_task("stack")
    state = reset(task, np.random.default_rng(2))
    obs = observe(state, task)
    assert obs.context.shape == (CONTEXT_DIM,)
    assert obs.state.shape == (STATE_DIM,)
    assert obs.context[list(TaskKind).index(TaskKind.STACK)] == 1.0
    assert obs.state[2] == -1.0


def test_chunk_windows_pad_with_still_actions():
    task = get_task("pick_place")
    record = run_expert_episode(task, np.random.default_rng(3))
    windows = chunk_windows(record, task, horizon=4)
    assert len(windows) == len(record.actions)
    for t, (_, chunk) in enumerate(windows[:-3]):
        assert chunk.shape == (4, ACTION_DIM)
        np.testing.assert_array_equal(chunk[0], record.actions[t].as_array())
    last = windows[-1][1]
    np.testing.assert_array_equal(last[1:, :2], 0.0)
    assert (last[1:, 2] == record.actions[-1].grip).all()
