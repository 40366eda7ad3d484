"""Utilities for hilbloc: parsing, exact linear algebra, caching, logging and reports."""
