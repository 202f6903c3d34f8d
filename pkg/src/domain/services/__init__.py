"""Servicios de dominio: numérica pura sin dependencias de infraestructura."""
