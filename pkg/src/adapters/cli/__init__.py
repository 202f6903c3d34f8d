"""Adaptador de línea de comandos."""
