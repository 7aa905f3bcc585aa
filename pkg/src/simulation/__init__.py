"""Monte Carlo super-channel simulation and codec cross-validation."""
