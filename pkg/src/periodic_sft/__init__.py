"""Transfer matrices, periodic pattern counts and entropy estimates for
two-dimensional shifts of finite type given by 2x2 basic sets."""

__version__ = "0.1.0"

from .errors import CapExceededError, ParseError, SFTError
from .patterns import BasicSet, Pattern2x2, load_basic_set, parse_basic_set

__all__ = ["BasicSet", "CapExceededError", "ParseError", "Pattern2x2", "SFTError",
           "__version__", "load_basic_set", "parse_basic_set"]
