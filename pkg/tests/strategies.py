import numpy as np
from hypothesis import strategies as st


def in_disc(max_radius=0.95):
    return st.builds(
        lambda r, t: complex(r * np.cos(t), r * np.sin(t)),
        st.floats(0.0, max_radius),
        st.floats(0.0, 2 * np.pi),
    )


def disc_tuples(n_min=1, n_max=6, max_radius=0.95):
    return st.lists(in_disc(max_radius), min_size=n_min, max_size=n_max)
