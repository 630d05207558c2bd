from pathlib import Path

from fock.core import HamiltonianSpec
from fock.document import load_spec


class SpecFile:
    model = None
    params = None

    def __init__(self, file_path: str | Path, base_dir: str | Path | None = None):
        self.file_path = file_path
        self.base_dir = base_dir

    @property
    def path(self) -> Path:
        return self.normalize_path(self.file_path, self.base_dir)

    def load(self) -> HamiltonianSpec:
        """
        Read a Hamiltonian document whether an absolute or relative path was given.

        Relative paths resolve against `base_dir`, or the working directory.
        """
        path = self.path
        if not path.is_file():
            raise FileNotFoundError(f"Spec file not found: {path}")
        return load_spec(path)

    def describe(self) -> str:
        return str(self.path)

    def normalize_path(self, raw_path: str | Path, base_dir: str | Path | None = None) -> Path:
        p = Path(raw_path).expanduser()
        if not p.is_absolute():
            base = Path(base_dir) if base_dir else Path.cwd()
            p = base / p

        return p.resolve(strict=False)
