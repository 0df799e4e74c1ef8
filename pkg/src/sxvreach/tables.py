"""Published running-time exponents, kept as data for cross-checking ``choose_delta``."""

# (sigma, g) for dense graphs, m = n^2
DENSE_G = (
    (0.335, 2.333565), (0.34, 2.3337), (0.35, 2.334241), (0.36, 2.33533), (0.37, 2.336422),
    (0.38, 2.33751), (0.39, 2.3386), (0.40, 2.33969), (0.41, 2.34159), (0.42, 2.34349),
    (0.43, 2.34539), (0.44, 2.34729), (0.45, 2.34919), (0.46, 2.35175), (0.47, 2.35431),
    (0.48, 2.35687), (0.49, 2.359435), (0.50, 2.3621996), (0.51, 2.365081), (0.52, 2.368166),
    (0.53, 2.371252),
)

# (mu, sigma, g) for m = n^mu
SPARSE_G = (
    (1.95, 0.375, 2.32), (1.95, 0.4, 2.323), (1.95, 0.45, 2.3325), (1.95, 0.50, 2.345),
    (1.9, 0.45, 2.3159), (1.9, 0.5, 2.3287), (1.9, 0.55, 2.344), (1.9, 0.6, 2.362),
    (1.75, 0.55, 2.294), (1.75, 0.6, 2.312), (1.75, 0.65, 2.331), (1.75, 0.7, 2.352),
    (1.525, 0.8, 2.323), (1.525, 0.85, 2.346), (1.525, 0.9, 2.3711),
)

# This cell equals (1 + mu + 2 * 2.222256) / 3: it was computed from an older omega(0.8)
# bound than the 2.220929 in the omega table, so it sits 7.1e-4 above the formula.
STALE_CELLS = frozenset({(1.525, 0.8)})
