import json
import logging
from typing import Any, Tuple

from sympy import isprime, perfect_power


logger = logging.getLogger(__name__)

def log_info(**kwargs: Any):
    logger.info(json.dumps(kwargs, indent=2, default=str))

class CMTaylorError(ValueError):
    pass

def split_prime_power(text: str) -> Tuple[int, int]:
    """
    Parse a modulus written as "p^A" (or a bare "p", or the integer p**A) into (p, A).

    The prime must be odd: congruences are taken in Z[sqrt(d)]/(p^A) for odd p only.
    """
    text = text.strip()
    if "^" in text:
        base, exponent = text.split("^", 1)
        p, A = int(base), int(exponent)
    else:
        value = int(text)
        if isprime(value):
            p, A = value, 1
        else:
            power = perfect_power(value)
            if not power:
                raise CMTaylorError(f"'{text}' is not a prime power")
            p, A = power
    if A < 1 or not isprime(p) or p == 2:
        raise CMTaylorError(f"'{text}' is not a power of an odd prime")
    return p, A
