from fsmodel.schema import Dataset, FeatureDescriptor, FeatureSchema


def toy_schema(*names, metrics=("y",)):
    return FeatureSchema(tuple(FeatureDescriptor(n) for n in names), metrics)


def random_instance(rng, n, p, metrics=1):
    X = rng.uniform(-10, 10, size=(n, p))
    Y = rng.uniform(-10, 10, size=(n, metrics))
    schema = toy_schema(*(f"x{j}" for j in range(p)), metrics=tuple(f"y{k}" for k in range(metrics)))
    return Dataset(schema, X, Y)


DENSE_GIGABIT = {
    "network": "gigabit", "disk_read_speed": 117, "disk_write_speed": 148,
    "base_filesystem": "xfs", "num_servers": 4, "num_clients": 1, "striping": 1,
    "replication": 1, "workload_size": 20,
}


def network_bound_model():
    """Throughput pinned at the Gigabit line rate, InfiniBand adding the
    published network coefficient; every other feature inert."""
    from fsmodel.advisor import GIGABIT_LINE_RATE_MBPS
    from fsmodel.regression import FittedModel
    from fsmodel.schema import HARDWARE
    from fsmodel.synthbench import TABLE5_COEFFICIENTS

    beta = {}
    for m, b in TABLE5_COEFFICIENTS.items():
        vec = [GIGABIT_LINE_RATE_MBPS, b[1]] + [0.0] * (HARDWARE.p - 1)
        beta[m] = vec
    return FittedModel(HARDWARE, beta)


def table7_candidates():
    """Ocean-code scenarios; FIST nodes carry two E5430-class sockets."""
    from fsmodel.advisor import DesignCandidate
    from fsmodel.schema import HARDWARE

    out = []
    for servers, network in ((4, "gigabit"), (4, "infiniband"), (10, "infiniband")):
        feats = dict(DENSE_GIGABIT, network=network, num_servers=servers)
        out.append(DesignCandidate.from_features(
            f"{servers} servers, {network}", HARDWARE, feats,
            cpu_points=servers * 2 * 3975.0, power_watts=servers * 2 * 80.0))
    return out
