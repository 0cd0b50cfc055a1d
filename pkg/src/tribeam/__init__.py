"""Three-beam single-photon interferometer: detection models, correlation
engine, click sampling and a circuit description format."""

__version__ = "0.1.0"
