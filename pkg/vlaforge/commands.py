import logging
import time
from pathlib import Path
from typing import Optional

from django.conf import settings
from django.core.management import BaseCommand, CommandError

from vlaforge.config import merge_overrides, read_config
from vlaforge.exceptions import ForgeError
from vlaforge.manifest import Manifest, config_hash, manifest_path
from vlaforge.seeding import SeedScheme

__all__ = ("ForgeCommand",)

logger = logging.getLogger(__name__)


class ForgeCommand(BaseCommand):
    """
    Base for every forge verb: shared ``--seed/--jobs/--config`` flags, domain
    errors mapped to exit code 1 and a manifest written next to each output.
    """

    requires_system_checks = []
    config_section: Optional[str] = None

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.add_argument("--seed", type=int, default=settings.FORGE_SEED)
        parser.add_argument("--jobs", type=int, default=settings.FORGE_JOBS)
        parser.add_argument("--config", type=Path, default=None)
        return parser

    def handle(self, *args, **options):
        self.scheme = SeedScheme(options["seed"])
        self.manifest = Manifest.start(options["seed"])
        self.started = time.perf_counter()
        try:
            self.run(**options)
        except ForgeError as exc:
            logger.error(f"{type(exc).__name__}: {exc}")
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=1)
        except (OSError, ValueError) as exc:
            raise CommandError(str(exc), returncode=1)

    def run(self, **options):
        raise NotImplementedError

    def load_config(self, options, overrides: dict) -> dict:
        """File section (if any) with the given CLI overrides applied."""
        config = read_config(options["config"]) if options.get("config") else {}
        if self.config_section is None:
            return config
        merged = merge_overrides(config, self.config_section, overrides)
        self.manifest.config_hash = config_hash(merged)
        return merged

    def finish(self, output: Path, **counters):
        self.manifest.counters.update({k: int(v) for k, v in counters.items()})
        self.manifest.elapsed_seconds = round(time.perf_counter() - self.started, 3)
        path = self.manifest.write(manifest_path(output))
        summary = ", ".join(f"{k}={v}" for k, v in sorted(self.manifest.counters.items()))
        self.stdout.write(f"Wrote {output} ({summary}); manifest {path}")

    def record_output(self, path: Path, schema: Optional[str] = None):
        self.manifest.add_output(path, schema)
