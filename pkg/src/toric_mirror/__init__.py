"""Toric varieties from GIT data, their quantum rings, and mirror periods."""

__version__ = "0.1.0"

from .errors import ToricMirrorError  # noqa: E402
from .toric_geom import Fan, GitPresentation, ToricModel, fan_from_git, git_from_fan  # noqa: E402
from .cohomology import CohomClass, RingPresentation, build_presentation, integrate  # noqa: E402

__all__ = [
    "__version__", "ToricMirrorError", "Fan", "GitPresentation", "ToricModel",
    "fan_from_git", "git_from_fan", "CohomClass", "RingPresentation",
    "build_presentation", "integrate",
]
