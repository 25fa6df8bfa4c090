"""Multi-parameter quantum group computations in exact arithmetic."""
