from pathlib import Path

from django.conf import settings


# fallbacks for settings modules that do not define SOLITONS
DEFAULTS = {
    'DEFAULT_L': 6,
    'DEFAULT_N': 4096,
    'MAX_N': 2 ** 15,
    'TOL': 1e-10,
    'MAX_ITER': 10000,
    'DAMPING': 1.0,
    'DAMPING_FLOOR': 0.05,
    'ANDERSON_DEPTH': 16,
    'SEED': 0,
    'OUTPUT_DIR': Path('runs'),
}


def solver_setting(name):
    """
    Read one entry of settings.SOLITONS, falling back to DEFAULTS.
    """
    if name not in DEFAULTS:
        raise KeyError(f"Unknown solver setting: {name}")
    return getattr(settings, 'SOLITONS', {}).get(name, DEFAULTS[name])
