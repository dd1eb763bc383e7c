"""Geometry kernel: points, segments, arcs and generalized regions."""
from .primitives import EPS, Arc, ArcSeg, Point, Segment, circle, dist
from .region import (
    GeneralizedRegion,
    Loop,
    RegionFace,
    aura_union,
    boundary_components_in_disc,
    connected_faces,
    disc,
    path_clearance,
    point_in_region,
    polygon_region,
    region_boolean,
)

__all__ = [
    "EPS", "Arc", "ArcSeg", "Point", "Segment", "circle", "dist",
    "GeneralizedRegion", "Loop", "RegionFace", "aura_union",
    "boundary_components_in_disc", "connected_faces", "disc", "path_clearance",
    "point_in_region", "polygon_region", "region_boolean",
]
