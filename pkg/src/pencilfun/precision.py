"""Working-precision constants (IEEE binary64)."""

import math

# Unit roundoff: half the machine epsilon of the working format.
UNIT_ROUNDOFF = 2.0 ** -53

# Machine epsilon, as used in deflation tests of iterative eigensolvers.
MACHINE_EPS = 2.0 ** -52

# Near-confluence threshold for first-order divided differences.
SQRT_UNIT_ROUNDOFF = math.sqrt(UNIT_ROUNDOFF)
