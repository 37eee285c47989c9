"""Theme and styling for terminal diagnostics."""

from blessed import Terminal

from ledgergraph.config import COLORS


class Theme:
    """Theme manager for consistent styling.

    Styling is dropped automatically when the terminal's stream is not a tty.
    """

    def __init__(self, term: Terminal) -> None:
        self.term = term

    def level_color(self, levelname: str) -> str:
        """Get colored log level name."""
        color_name = COLORS.get(levelname, "white")
        color_func = getattr(self.term, color_name, self.term.white)
        return str(color_func(levelname.lower()))

    def error(self, text: str) -> str:
        """Style error text."""
        return str(self.term.bold_red(text))

    def dim(self, text: str) -> str:
        """Style dimmed text."""
        try:
            return str(self.term.dim(text))
        except (TypeError, AttributeError):
            pass
        # Fallback to darker color if dim not supported
        try:
            return str(self.term.bright_black(text))
        except (TypeError, AttributeError):
            return text
