# Ranking Gluster parameters when the response is far from linear.
#
# Throughput saturates in block size; with O_SYNC off the read path also
# benefits from cache. Importance is computed from the data directly.
from fsmodel import GLUSTER, GeneratorConfig, generate, importance_report

for o_sync in (True, False):
    data, _ = generate(GeneratorConfig(regime="gluster", n=2000, seed=42, o_sync=o_sync))
    report = importance_report(data)
    print(f"\nO_SYNC {'on' if o_sync else 'off'}")
    print(f"{'feature':15s}" + "".join(f"{m:>17s}" for m in GLUSTER.metrics))
    for f in GLUSTER.feature_names:
        print(f"{f:15s}" + "".join(f"{report.importance(m, f):17.3f}" for m in GLUSTER.metrics))

# %% grouping used per feature: discrete grid levels, no binning needed
for name, g in report.grouping.items():
    print(name, g.groups, "groups")
