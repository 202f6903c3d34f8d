"""
Punto de entrada de la aplicación.

Uso: python -m src.main <verbo> [opciones]  (o el script spectral-enhance)
"""
from __future__ import annotations

from src.adapters.cli.cli import run

if __name__ == "__main__":
    run()
