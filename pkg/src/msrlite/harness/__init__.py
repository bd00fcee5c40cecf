"""File formats, CLI, benchmark sweep and failure simulator."""
