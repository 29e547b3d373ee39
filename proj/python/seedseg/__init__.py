"""Single-image neural segmentation: impulse-noise training set, 6-H-2 perceptron, region growing."""

from ._core import (
    Mlp,
    SeedsegError,
    build_training_set,
    init_mlp,
    load_ppm,
    parse_model,
    render_contours,
    save_ppm,
    segment_auto,
    segment_from_point,
    serialize_model,
    train,
    train_on_image,
)

__all__ = [
    "Mlp",
    "SeedsegError",
    "build_training_set",
    "init_mlp",
    "load_ppm",
    "parse_model",
    "render_contours",
    "save_ppm",
    "segment_auto",
    "segment_from_point",
    "serialize_model",
    "train",
    "train_on_image",
]
