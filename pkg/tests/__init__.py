"""sinrgraph test suite."""
