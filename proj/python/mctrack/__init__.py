"""Moving-camera object detection and tracking."""

from ._core import (
    MctrackError,
    build_background,
    compensate,
    estimate_shift,
    evaluate,
    foreground_mask,
    quantize,
    render_scene,
    track,
)

__all__ = [
    "MctrackError",
    "build_background",
    "compensate",
    "estimate_shift",
    "evaluate",
    "foreground_mask",
    "quantize",
    "render_scene",
    "track",
]
