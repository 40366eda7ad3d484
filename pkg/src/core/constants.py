"""Defaults, resource bounds and enumeration limits for hilbloc."""

import pathlib

HOME = str(pathlib.Path.home())

VERSION = "0.3.0"

DEFAULT_CACHE_DIR = f"{HOME}/.cache/hilbloc"

# Buchberger bounds; exceeding either raises BoundExceeded
DEFAULT_MAX_PAIRS = 20000
DEFAULT_MAX_DEGREE = 60

DEFAULT_ORDER = "grevlex"
DEFAULT_SEED = 0
OUTPUT_FORMATS = ("human", "kv")

# Point enumeration over F_q
ENUM_FIELD_SIZES = (2, 3, 5)
ENUM_MAX_N_LINE = 3
ENUM_MAX_N_PLANE = 2

# Divisor trials when factoring bivariate polynomials over F_p
KRONECKER_MAX_SUBSETS = 4096

# Variable names used for Hilb^n of the line and the fresh inverse variable
ELEMENTARY_PREFIX = "e"
LINE_VARIABLE = "x"
INVERSE_VARIABLE = "t"

KV_PREFIX = ":: "
REPORT_WIDTH = 100

NONSCHEME_SAMPLES = ("1/(x-1)", "1/(y-1)", "1/x", "(x+y)/x^2", "1/(x*(y-1))")
