# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

# -----------------------
# Standard Python imports
# ----------------------

from typing import Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

# --------------
# local imports
# -------------

from .core import Clustering, PointDataset, clustering_from_labels

# ----------------
# Module constants
# ----------------

UNIFORM_BOX = ((0.0, 20.0), (0.0, 5.0))
GAUSS_CENTERS = ((6.0, -6.0), (14.0, -6.0))
GAUSS_SD = 0.5

# ===========
# Generic API
# ===========


def mixed_shapes_dataset(
    rng: np.random.Generator, n_uniform: int = 70, n_gauss: int = 15
) -> Tuple[PointDataset, Clustering]:
    """
    Widespread uniform cloud over a wide rectangle plus two small Gaussian
    clusters below it, far from the cloud and from each other.
    Returns the points and the true labels (cloud first, then the two Gaussians).
    """
    (x0, x1), (y0, y1) = UNIFORM_BOX
    cloud = np.column_stack((rng.uniform(x0, x1, n_uniform), rng.uniform(y0, y1, n_uniform)))
    blobs = [rng.normal(loc=center, scale=GAUSS_SD, size=(n_gauss, 2)) for center in GAUSS_CENTERS]
    coords = np.vstack([cloud] + blobs)
    labels = np.repeat([1, 2, 3], [n_uniform, n_gauss, n_gauss])
    return PointDataset.from_rows(coords.tolist()), clustering_from_labels(labels)
