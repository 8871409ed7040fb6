from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

from experiments.exceptions import UnknownVariant
from vlaforge.config import parse_list

__all__ = ("InitVariant", "MatrixConfig", "RunReport", "VARIANTS", "get_variant")


@dataclass(frozen=True)
class InitVariant:
    name: str
    # None: no pretraining; otherwise "in_domain" or "out_domain"
    pretrain_corpus: Optional[str] = None
    kinds: Tuple[str, ...] = ()
    reference: bool = False


VARIANTS = {
    variant.name: variant
    for variant in (
        InitVariant("random"),
        InitVariant("out_domain", "out_domain", ("grounding", "spatial")),
        InitVariant("in_domain", "in_domain", ("general", "grounding", "spatial")),
        InitVariant("in_domain_general", "in_domain", ("general",)),
        InitVariant("in_domain_grounding", "in_domain", ("grounding",)),
        InitVariant("in_domain_spatial", "in_domain", ("spatial",)),
        InitVariant("expert", reference=True),
    )
}


def get_variant(name: str) -> InitVariant:
    try:
        return VARIANTS[name]
    except KeyError:
        raise UnknownVariant(f"Unknown variant {name!r}, expected one of {sorted(VARIANTS)}")


@dataclass(frozen=True)
class MatrixConfig:
    variants: Tuple[str, ...] = ("expert", "random", "out_domain", "in_domain")
    tasks: Tuple[str, ...] = ("pick_place",)
    seeds: Tuple[int, ...] = (0, 1, 2, 3, 4)
    threshold: float = 0.8
    rolling: int = 1
    eval_every: int = 500
    eval_episodes: int = 50
    train_steps: int = 3000
    batch_size: int = 64
    lr: float = 1e-3
    demo_episodes: int = 200
    pretrain_steps: int = 500
    pretrain_lr: float = 1e-3
    corpus_size: int = 300

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("A matrix needs at least one seed")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")
        if min(self.eval_every, self.eval_episodes, self.rolling, self.train_steps) < 1:
            raise ValueError("eval_every, eval_episodes, rolling and train_steps must be positive")
        for name in self.variants:
            get_variant(name)

    @classmethod
    def from_section(cls, values: Dict[str, str]) -> "MatrixConfig":
        """Build from an ``[experiment]`` config section; absent keys keep their defaults."""
        kwargs = {}
        for name, default in asdict(cls()).items():
            if name not in values:
                continue
            if isinstance(default, tuple):
                cast = int if name == "seeds" else str
                kwargs[name] = tuple(parse_list(values[name], cast))
            else:
                kwargs[name] = type(default)(values[name])
        unknown = set(values) - set(asdict(cls()))
        if unknown:
            raise ValueError(f"Unknown experiment keys: {sorted(unknown)}")
        return cls(**kwargs)

    def to_json(self) -> dict:
        return asdict(self)


@dataclass
class RunReport:
    variant: str
    seed: int
    tasks: List[str]
    threshold: float
    success_rate: Dict[str, float]
    censored: bool
    steps_to_threshold: Optional[int] = None
    eval_steps: List[int] = field(default_factory=list)
    eval_success: List[float] = field(default_factory=list)
    loss_curve: Optional[str] = None
    config_hash: Optional[str] = None

    @property
    def final_success(self) -> float:
        return sum(self.success_rate.values()) / len(self.success_rate)

    @classmethod
    def from_json(cls, data: dict) -> "RunReport":
        return cls(**data)
