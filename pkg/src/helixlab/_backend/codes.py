"""Status codes shared by the numpy and numba kernel implementations."""

STATUS_OK = 0
STATUS_DIV_ZERO = 1
STATUS_NEG_SQRT = 2
STATUS_NULL_FRAME = 3
STATUS_SIGN_FLIP = 4
STATUS_DRIFT = 5

# |denominator| below this triggers STATUS_DIV_ZERO in expression evaluation
DIV_FLOOR = 1e-300
