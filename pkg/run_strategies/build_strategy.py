from fock.document import dump_spec

from .strategy import EXIT_OK, RunStrategy


class BuildStrategy(RunStrategy):
    def run(self) -> int:
        """
        Writes the canonical Hamiltonian document. Loading a canonical document
        and building it again reproduces the same bytes.
        """
        spec = self.fetch_spec()
        self.config.emit(dump_spec(spec))
        return EXIT_OK
