from enum import Enum

DEFAULT_T_VALUES = (1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5)
DFF_EPSILON = 1e-12
MAX_DIMENSION = 2


class LaplacianKind(Enum):
    UP = "up"
    DOWN = "down"
    FULL = "full"


class Variant(Enum):
    """
    Experimental variants: which simplices carry the heat and which
    Laplacian drives the diffusion.
    """

    VERTEX_UP = "vertex-up"
    EDGE_DOWN = "edge-down"
    EDGE_UP = "edge-up"
    EDGE_BOTH = "edge-both"
    TRIANGLE_DOWN = "triangle-down"

    @property
    def dimension(self):
        """
        Returns:
            int
        """
        return _VARIANT_LAYOUT[self][0]

    @property
    def kind(self):
        """
        Returns:
            LaplacianKind
        """
        return _VARIANT_LAYOUT[self][1]

    @classmethod
    def parse(cls, value):
        """
        Look up a variant by its hyphenated name.

        Args:
            value (str|Variant):

        Returns:
            Variant
        """
        if isinstance(value, cls):
            return value

        try:
            return cls(value.strip().lower())
        except ValueError:
            names = ", ".join(v.value for v in cls)
            raise ValueError(f"Unknown variant {value!r}, expected one of {names}")


_VARIANT_LAYOUT = {
    Variant.VERTEX_UP: (0, LaplacianKind.UP),
    Variant.EDGE_DOWN: (1, LaplacianKind.DOWN),
    Variant.EDGE_UP: (1, LaplacianKind.UP),
    Variant.EDGE_BOTH: (1, LaplacianKind.FULL),
    Variant.TRIANGLE_DOWN: (2, LaplacianKind.DOWN),
}
