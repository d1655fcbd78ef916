"""GUE minors, maximal Brownian functionals and RSK shapes."""
