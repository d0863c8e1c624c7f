"""gapcover: exact gadget constructions and certification for hard ball-cover instances."""

__version__ = "0.1.0"
