"""Global limits.  The element-enumeration cap can be overridden with HAAR_MAX_GROUP_ORDER."""

import os

MAX_MODULUS = 1 << 20
DEFAULT_MAX_GROUP_ORDER = 2_000_000


def max_group_order() -> int:
    raw = os.environ.get("HAAR_MAX_GROUP_ORDER")
    if raw:
        return int(raw)
    return DEFAULT_MAX_GROUP_ORDER
