"""Entry point for ledgergraph."""

import sys

from ledgergraph.ui.app import App


def main(argv: list[str] | None = None) -> int:
    """Main entry point."""
    app = App()
    return app.run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
