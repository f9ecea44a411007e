"""A budgeted knowing machine for epistemic arithmetic that knows its own index."""

from rich.traceback import install


install(show_locals=False)
