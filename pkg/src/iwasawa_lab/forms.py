"""Binary quadratic form kernel, compiled when available.

Set ``IWASAWA_LAB_PURE=1`` to force the pure-Python fallback.
"""

import os

from . import _forms_py

BACKEND = "python"
_impl = _forms_py
if os.environ.get("IWASAWA_LAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _forms as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _forms_py

reduce_form = _impl.reduce_form
compose = _impl.compose
identity = _impl.identity
form_power = _impl.form_power
reduced_forms = _impl.reduced_forms
element_orders = _impl.element_orders


def inverse(f):
    a, b, c = f
    return _impl.reduce_form(a, -b, c)


__all__ = ["BACKEND", "reduce_form", "compose", "identity", "form_power", "reduced_forms",
           "element_orders", "inverse"]
