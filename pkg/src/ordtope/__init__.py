"""Prime-power encodings, rank oracles over implicit orders, and distance equations."""
from .codes import GCode, LCode, derive_constants, g_decode, g_encode, l_encode
from .numeric import FixedLog, PrimeBasis, gen_primes, log_floor, required_digits
from .order import RankOracle, order_curve, order_search, rank, unrank

__version__ = "0.1.0"

__all__ = [
    "FixedLog", "GCode", "LCode", "PrimeBasis", "RankOracle", "derive_constants",
    "g_decode", "g_encode", "gen_primes", "l_encode", "log_floor", "order_curve",
    "order_search", "rank", "required_digits", "unrank",
]
