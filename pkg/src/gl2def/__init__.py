"""Universal deformation rings of cuspidal mod-l representations of GL_2."""

__version__ = "0.1.0"
