# Fitting a throughput model to a hardware/workload benchmark campaign.
#
# The synthetic campaign plants the published per-metric coefficients, so we
# can check that the fit gets them back.
import warnings

import numpy as np

from fsmodel import HARDWARE, GeneratorConfig, encode_value, fit, generate, predict
from fsmodel.evaluation import model_fit_stats
from fsmodel.regression import NegativePredictionWarning
from fsmodel.synthbench import TABLE5_COEFFICIENTS

# %% 2000 configurations drawn from the hardware grid, 10 MB/s noise
data, truth = generate(GeneratorConfig(regime="hardware", n=2000, seed=42))
print(data.n, "records;", "population R^2 (write):", round(truth.population_r2["write_mbps"], 4))

# %% one least-squares fit per metric, sharing a single QR factorisation
model = fit(data)
planted = np.array(TABLE5_COEFFICIENTS["write_mbps"])
print(f"{'':18s}{'planted':>10s}{'fitted':>10s}")
for name, p, b in zip(["constant", *HARDWARE.feature_names], planted, model.beta["write_mbps"]):
    print(f"{name:18s}{p:10.3f}{b:10.3f}")

stats = model_fit_stats(model, data)
for metric, s in stats.items():
    print(f"{metric:16s} R^2={s.r2:.4f}  adjusted={s.adj_r2:.4f}")

# %% predicting a configuration: 5 InfiniBand servers, one client, 20 GB
raw = {"network": "infiniband", "disk_read_speed": 117, "disk_write_speed": 148,
       "base_filesystem": "ext3", "num_servers": 5, "num_clients": 1, "striping": 1,
       "replication": 1, "workload_size": 20}
x = [encode_value(f, raw[f.name]) for f in HARDWARE.features]
print("predicted write:", round(predict(model, x, "write_mbps"), 2), "MB/s")

# %% the same configuration on Gigabit falls below zero under a linear model
x[0] = 0.0
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always", NegativePredictionWarning)
    y = predict(model, x, "write_mbps")
print("gigabit write:", round(y, 2), "MB/s;", caught[0].message if caught else "")
