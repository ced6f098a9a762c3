import numpy as np
import pytest
from scipy.signal import lfilter

# worked-example series: 5 windows at D=3, tau=1 with pattern
# probabilities 2/5, 2/5, 1/5
WORKED_SERIES = [4.0, 7.0, 9.0, 10.0, 6.0, 11.0, 3.0]

# expected values pinned from a 50-digit mpmath evaluation of the defining
# formulas on the worked-example distribution (2/5, 2/5, 1/5, 0, 0, 0)
S_EXAMPLE = 1.0549201679861442
H_EXAMPLE = 0.5887621559162939
J_EXAMPLE = 0.22354357052825233
C_EXAMPLE = 0.28995444646461865
DIST_EXAMPLE = 0.503180032822466
Q0_2 = 4.6347459957096095
Q0_6 = 2.203066987747817
Q0_24 = 1.6510470181287606
Q0_120 = 1.4947340849734594
LN2 = 0.6931471805599453
LN6 = 1.791759469228055
STD_PAIR = 0.1414213562373095  # sample std of {0.4, 0.6}


def ar1(phi: float, n: int, seed: int, burn: int = 100) -> np.ndarray:
    """AR(1) path x_t = phi x_{t-1} + eps_t with standard normal shocks."""
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(n + burn)
    x = lfilter([1.0], [1.0, -phi], eps)
    return x[burn:]


@pytest.fixture
def worked_series():
    return list(WORKED_SERIES)


@pytest.fixture
def write_wide_csv(tmp_path):
    """Factory writing a wide-layout panel CSV into tmp_path."""

    def _write(columns: dict[str, list], name: str = "panel.csv", labels=None):
        lengths = {len(v) for v in columns.values()}
        assert len(lengths) == 1
        n = lengths.pop()
        if labels is None:
            labels = [f"d{i}" for i in range(n)]
        lines = ["date," + ",".join(columns)]
        for i in range(n):
            cells = [str(labels[i])]
            for series in columns.values():
                v = series[i]
                cells.append("" if v is None else repr(float(v)))
            lines.append(",".join(cells))
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
