"""A small enumerator language with numeric program indices."""
