"""Platform kernels returning (E4, eta) pairs for the factorization law."""
