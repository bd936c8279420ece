"""Contact Hamiltonian systems on Cayley-Klein spaces."""
__version__ = "0.1.0"
