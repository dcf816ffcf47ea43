"""Functions shared by every sub-project in this workspace."""


def dot_product(a, b):
    """Compute the dot product of two sequences of numbers.

    Parameters
    ----------
    a : sequence of float
        The first vector.
    b : sequence of float
        The second vector, the same length as ``a``.

    Returns
    -------
    float
        The sum of the element-wise products.
    """
    if len(a) != len(b):
        raise ValueError(
            "Both vectors must have the same length, "
            f"got {len(a)} and {len(b)}."
        )
    return sum(x * y for x, y in zip(a, b))
