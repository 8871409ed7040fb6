"""
The ``forge`` entry point.

Verbs are hyphenated on the command line and map one-to-one onto Django
management commands (``gen-grounding`` -> ``gen_grounding``). Exit codes:
0 on success, 1 on validation or domain errors, 2 on usage errors.
"""
import os
import sys
from typing import List, Optional

__all__ = ("VERBS", "main", "run_cli")

VERBS = {
    "gen-grounding": "Generate grounding QA from mask records",
    "gen-spatial": "Generate spatial-reasoning QA from scene records",
    "gen-planning": "Roll out planning tasks and keep successful trajectories",
    "gen-indomain": "Annotate simulator states with in-domain QA",
    "collect-demos": "Record scripted-expert demonstrations",
    "train-policy": "Train the flow-matching action policy on demonstrations",
    "eval-policy": "Evaluate a policy in closed loop",
    "experiment": "Run the encoder-initialization comparison matrix",
    "validate": "Check a JSONL file against its schema",
}


def usage() -> str:
    width = max(len(verb) for verb in VERBS)
    lines = ["usage: forge <verb> [options]", "", "verbs:"]
    lines += [f"  {verb.ljust(width)}  {text}" for verb, text in VERBS.items()]
    return "\n".join(lines) + "\n"


def run_cli(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        sys.stderr.write(usage())
        return 2
    verb = argv[0]
    if verb in ("-h", "--help", "help"):
        sys.stdout.write(usage())
        return 0
    if verb not in VERBS:
        sys.stderr.write(f"forge: unknown verb {verb!r}\n\n{usage()}")
        return 2

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "vlaforge.settings")
    import django
    from django.core.management import get_commands, load_command_class

    django.setup()
    name = verb.replace("-", "_")
    command = load_command_class(get_commands()[name], name)
    try:
        command.run_from_argv(["forge", verb, *argv[1:]])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
