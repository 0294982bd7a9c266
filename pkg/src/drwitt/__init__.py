"""Exact de Rham-Witt arithmetic over Z_(p), its log variant and its polynomial extension."""
