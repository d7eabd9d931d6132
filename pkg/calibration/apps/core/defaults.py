"""Toolkit defaults; settings.MDTS is built from these and may override any key."""

DEFAULTS = {
    'BINS': 20,
    'TEMPERATURE_CLAMP': (0.05, 50.0),
    'TS_TOLERANCE': 1e-6,
    'TS_MAX_ITERATIONS': 200,
    'KRR_MAX_SUPPORT': 1000,
    'REGRESSOR_DEFAULTS': {
        'ols': {},
        'ridge': {'lam': 1e-2},
        'huber': {'delta': 1.35, 'alpha': 1e-3},
        'krr': {'gamma': 1e-1, 'lam': 1e-2},
        'knn': {'k': 10},
    },
    'REGRESSOR_GRIDS': {
        'ols': {},
        'ridge': {'lam': [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0]},
        'huber': {'delta': [1.0, 1.35, 2.0], 'alpha': [0.0, 1e-3, 1e-1]},
        'krr': {'gamma': [1e-3, 1e-2, 1e-1, 1.0, 10.0],
                'lam': [1e-4, 1e-3, 1e-2, 1e-1, 1.0]},
        'knn': {'k': [1, 3, 5, 10, 20, 50]},
    },
    'SYNTH': {
        'LOGIT_SCALE': 2.0,
        'C_RANGE': (0.5, 3.0),
        'EMBED_MODE': 'direct',
        'EMBED_NOISE': 0.05,
        'MIX_DIM': 4,
    },
    'BOUND': {
        'SLACK': 0.05,
        'TEMP_GRID': 11,
        'TEMP_RANGE': (0.25, 4.0),
        'THRESHOLD_GRID': 21,
        'ALPHA_RESOLUTION': 10,
        'MAX_DOMAINS': 4,
    },
}
