"""Multi-animal segmentation tracking and evaluation.

Errors raised by the core library surface as ``SegtrackError`` (a
``ValueError``) with ``args == (message, kind)``.
"""

from ._segtrack import (
    SegtrackError,
    evaluate_coco_ap,
    evaluate_mot,
    event_rate,
    hungarian,
    labelme_to_coco,
    mask_iou,
    mask_to_polygons,
    mota,
    polygon_area,
    polygon_perimeter,
    rasterize,
    rle_area,
    rle_counts,
    rle_decode,
    rle_encode,
    sample_frames,
    segment_bouts,
    simplify_polygon,
    split_dataset,
    synthesize,
    tracks_csv,
)

__all__ = [
    "SegtrackError",
    "evaluate_coco_ap",
    "evaluate_mot",
    "event_rate",
    "hungarian",
    "labelme_to_coco",
    "mask_iou",
    "mask_to_polygons",
    "mota",
    "polygon_area",
    "polygon_perimeter",
    "rasterize",
    "rle_area",
    "rle_counts",
    "rle_decode",
    "rle_encode",
    "sample_frames",
    "segment_bouts",
    "simplify_polygon",
    "split_dataset",
    "synthesize",
    "tracks_csv",
]
