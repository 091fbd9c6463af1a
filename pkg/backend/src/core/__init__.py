"""Computational modules: exact polynomials, recurrences, enumerations, spectra, sampling."""
