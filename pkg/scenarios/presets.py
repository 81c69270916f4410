"""
Bundled scenarios. They go through the same loader as scenario files.
"""

TABLE2_DEDICATED = """
name: table2-dedicated
mode: dedicated
cell_side_m: 500
lambda_b_per_cell: 1
lambda_u_per_cell: 60
delta_mean_m: 50
p_b_dbm: 46
p_d_dbm: 20
noise_dbm: -104
alpha: 3.5
b_total: 50
b_c: 5
w: 2
theta: 0.5
bandwidth_hz: 10000000
d2d_types:
  - {lambda_d_per_cell: 15, b_d: 5, p_t: 1, p_f: 0.2}
  - {lambda_d_per_cell: 15, b_d: 15, p_t: 1, p_f: 0.6}
"""

TABLE2_SHARED = """
name: table2-shared
mode: shared
cell_side_m: 500
lambda_b_per_cell: 1
lambda_u_per_cell: 60
delta_mean_m: 50
p_b_dbm: 46
p_d_dbm: 20
noise_dbm: -104
alpha: 3.5
b_total: 50
b_c: 5
w: 2
theta: 0.5
bandwidth_hz: 10000000
d2d_types:
  - {lambda_d_per_cell: 15, b_d: 5, p_t: 1, p_f: 0.1}
  - {lambda_d_per_cell: 15, b_d: 15, p_t: 1, p_f: 0.3}
"""

# Long D2D links: mean distance 280 m
FIG10_DISTANCE280 = """
name: fig10-distance280
mode: dedicated
cell_side_m: 500
lambda_b_per_cell: 1
lambda_u_per_cell: 60
delta_mean_m: 280
p_b_dbm: 46
p_d_dbm: 20
noise_dbm: -104
alpha: 3.5
b_total: 50
b_c: 5
w: 2
theta: 0.5
bandwidth_hz: 10000000
d2d_types:
  - {lambda_d_per_cell: 15, b_d: 5, p_t: 1, p_f: 0.2}
  - {lambda_d_per_cell: 15, b_d: 15, p_t: 1, p_f: 0.6}
"""

# lambda_D = 0.1 lambda_B in total, split evenly over the two types
LOWDENSITY_LAMBDAD_01 = """
name: lowdensity-lambdaD-0.1
mode: dedicated
cell_side_m: 500
lambda_b_per_cell: 1
lambda_u_per_cell: 60
delta_mean_m: 50
p_b_dbm: 46
p_d_dbm: 20
noise_dbm: -104
alpha: 3.5
b_total: 50
b_c: 5
w: 2
theta: 0.5
bandwidth_hz: 10000000
d2d_types:
  - {lambda_d_per_cell: 0.05, b_d: 5, p_t: 1, p_f: 0.2}
  - {lambda_d_per_cell: 0.05, b_d: 15, p_t: 1, p_f: 0.6}
"""

PRESETS = {
    "table2-dedicated": TABLE2_DEDICATED,
    "table2-shared": TABLE2_SHARED,
    "fig10-distance280": FIG10_DISTANCE280,
    "lowdensity-lambdaD-0.1": LOWDENSITY_LAMBDAD_01,
}
