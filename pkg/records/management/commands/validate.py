from pathlib import Path

from django.core.management import CommandError

from records.schemas import SCHEMAS
from records.services import validate_file
from vlaforge.commands import ForgeCommand
from vlaforge.manifest import Manifest, manifest_path


def find_manifest(path: Path):
    """The manifest that recorded ``path``: its own sidecar, else the directory's."""
    for candidate in (manifest_path(path), path.parent / "manifest.json"):
        if candidate.is_file():
            manifest = Manifest.read(candidate)
            if any(entry.path == path.name for entry in manifest.outputs):
                return manifest
    return None


class Command(ForgeCommand):
    help = "Check a JSONL file line by line against one of the forge record schemas."

    def add_arguments(self, parser):
        parser.add_argument("path", type=Path)
        parser.add_argument("--schema", choices=sorted(SCHEMAS), required=True)
        parser.add_argument(
            "--ignore-manifest",
            action="store_true",
            help="Skip the hash and count check against the manifest written next to the file",
        )

    def run(self, **options):
        path = options["path"]
        if not path.is_file():
            raise CommandError(f"No such file: {path}", returncode=1)
        report = validate_file(path, options["schema"])
        for violation in report.violations:
            self.stderr.write(str(violation))
        self.stdout.write(f"{path}: {report.records} records, {len(report.violations)} violations")

        manifest = None if options["ignore_manifest"] else find_manifest(path)
        stale = manifest is not None and path.name in manifest.verify(path.parent)
        if stale:
            self.stderr.write(f"{path}: hash or record count differs from its manifest")
        if not report.valid:
            raise CommandError(f"{len(report.violations)} schema violations", returncode=1)
        if stale:
            raise CommandError(f"{path} was modified after it was written", returncode=1)
