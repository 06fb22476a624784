"""Navigation engine tuning knobs.

Every threshold the engine uses lives here so deployments can tune them
in one place; the defaults are the ones the whole test suite pins.
"""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class NavConfig:
    """Engine-wide configuration.

    Attributes:
        pan_increment: heading change per pan, degrees.
        facing_cone: half-angle of the "you are facing X" place cone, degrees.
        facing_max_distance: max distance for the facing clause, meters.
        nearby_radius: radius for nearby-place lists and AI context, meters.
        grid_extent: side length of the square pano/road search grid, meters.
        grid_step: sampling step for point-query providers, meters (the
            synthetic provider answers range queries directly, so this only
            matters for live adapters).
        ray_step: spacing of intersection-probe samples along a ray, meters.
        jump_max: maximum jump distance, meters.
        forward_tolerance: half-angle for "along this heading", degrees.
        undo_depth: capacity of the go-back stack.
        capture_size: view capture width/height, pixels.
        chat_token_budget: maximum estimated input tokens kept in a chat
            session's context.
        relative_place_phrasing: announce places relative to the user's
            heading (the default) rather than with absolute compass terms.
    """

    pan_increment: float = 45.0
    facing_cone: float = 45.0
    facing_max_distance: float = 35.0
    nearby_radius: float = 50.0
    grid_extent: float = 20.0
    grid_step: float = 5.0
    ray_step: float = 15.0
    jump_max: float = 70.0
    forward_tolerance: float = 22.5
    undo_depth: int = 1
    capture_size: int = 640
    chat_token_budget: int = 1_048_576
    relative_place_phrasing: bool = True

    def __post_init__(self) -> None:
        for name in (
            "pan_increment",
            "facing_cone",
            "facing_max_distance",
            "nearby_radius",
            "grid_extent",
            "grid_step",
            "ray_step",
            "jump_max",
            "forward_tolerance",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.undo_depth < 1:
            raise ValueError("undo_depth must be at least 1")
        if self.forward_tolerance > self.pan_increment / 2.0:
            raise ValueError("forward_tolerance must not exceed pan_increment/2")

    @classmethod
    def from_overrides(cls, overrides: dict) -> "NavConfig":
        """Builds a config from a (possibly partial) mapping of field names."""
        known = {f.name for f in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**overrides)
