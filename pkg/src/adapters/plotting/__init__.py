"""Adaptadores de trazado (SVG estático opcional)."""
