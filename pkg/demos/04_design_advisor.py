# Choosing a CPU for a dense, low-power Gigabit cluster, and ordering
# network/server-count scenarios.
import math

from fsmodel import HARDWARE, DesignCandidate, FittedModel, rank_designs
from fsmodel.advisor import GIGABIT_LINE_RATE_MBPS, table1_candidates
from fsmodel.synthbench import TABLE5_COEFFICIENTS

dense = {"network": "gigabit", "disk_read_speed": 117, "disk_write_speed": 148,
         "base_filesystem": "xfs", "num_servers": 4, "num_clients": 1, "striping": 1,
         "replication": 1, "workload_size": 20}

# %% a network-bound model: Gigabit saturates at line rate whatever else changes
beta = {m: [GIGABIT_LINE_RATE_MBPS, b[1]] + [0.0] * (HARDWARE.p - 1)
        for m, b in TABLE5_COEFFICIENTS.items()}
network_bound = FittedModel(HARDWARE, beta)

for v in rank_designs(network_bound, table1_candidates(HARDWARE, dense)):
    print(f"{v.name:24s} cap {v.cpu_cap:7.1f}  capped {v.capped['write_mbps']:6.1f} MB/s  "
          f"{v.perf_per_watt:5.2f} MB/s/W  limited by {v.limiting_factor}")

# %% scenario ordering under the published linear model, throughput objective
planted = FittedModel(HARDWARE, dict(TABLE5_COEFFICIENTS))
scenarios = []
for servers, net in ((4, "gigabit"), (4, "infiniband"), (10, "infiniband")):
    feats = dict(dense, network=net, num_servers=servers)
    scenarios.append(DesignCandidate.from_features(
        f"{servers} servers, {net}", HARDWARE, feats, servers * 7950, servers * 160))
for rank, v in enumerate(rank_designs(planted, scenarios, objective="throughput",
                                      cap_coefficient=math.inf), 1):
    print(rank, v.name, round(v.predicted["write_mbps"], 1), "MB/s", v.negative or "")
