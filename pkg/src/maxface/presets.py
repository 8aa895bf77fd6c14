"""Named Björling data sets used as fixtures and CLI presets."""

from .bjorling import BjorlingData

#: delta = (sin u, -cos u, u), mu = delta' with its special points at -1, 0, 1
_HELIX = ("sin(u)", "-cos(u)", "u")
_HELIX_PRIME = ("cos(u)", "sin(u)", "1")


def _example_3_1():
    return BjorlingData.from_curve(
        _HELIX, ("u*cos(u)", "u*sin(u)", "u"), (0.0, 1.0), 0.5, name="example-3-1")


def _example_3_2():
    return BjorlingData.from_curve(
        ("u - u^3/3", "u^2", "u + u^3/3"),
        ("u^2*(1 - u^2)", "u^2*(2*u)", "u^2*(1 + u^2)"),
        (0.0, 1.0), 0.5, name="example-3-2")


def _example_3_4():
    # gamma' = (u - n)(u - p)^2 delta', L = mu with (m, n, p) = (-1, 0, 1)
    factor = "u*(u - 1)^2"
    return BjorlingData.from_derivative(
        tuple(f"{factor}*{c}" for c in _HELIX_PRIME), _HELIX_PRIME,
        (-1.5, 1.5), 0.0, gamma_base=(0.0, -1.0, 0.0), name="example-3-4")


def _example_3_5():
    factor = "u*(u - 1)^2"
    return BjorlingData.from_curve(
        _HELIX, tuple(f"{factor}*{c}" for c in _HELIX_PRIME),
        (-1.5, 1.5), 0.0, name="example-3-5")


def _shrinking():
    return BjorlingData.zero_curve(
        ("1 - t^2", "2*t", "1 + t^2"), (-1.0, 1.0), 0.0, name="shrinking")


def _folded_helix():
    return BjorlingData.from_curve(_HELIX, ("0", "0", "0"), (-1.5, 1.5), 0.0,
                                   name="folded-helix")


_PRESETS = {
    "example-3-1": _example_3_1,
    "example-3-2": _example_3_2,
    "example-3-4": _example_3_4,
    "example-3-5": _example_3_5,
    "shrinking": _shrinking,
    "folded-helix": _folded_helix,
}

#: special points and their expected types, per preset
SPECIAL_POINTS = {
    "example-3-4": {-1.0: "CuspidalEdge", 0.0: "Swallowtail", 1.0: "CuspidalButterfly"},
    "example-3-5": {-1.0: "CuspidalEdge", 0.0: "CuspidalCrosscaps", 1.0: "CuspidalS1Minus"},
}


def list_presets():
    return list(_PRESETS)


def get_preset(name):
    try:
        return _PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(_PRESETS)}") from None
