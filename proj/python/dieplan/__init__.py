"""Contact maps, feature segmentation and finishing plans for forging-die meshes."""

import json

from ._core import (
    DieplanError,
    Mesh,
    association_json,
    compute_pitch,
    contact_map_json,
    continuity_json,
    default_config_json,
    indicators,
    plan_json,
    segmentation_json,
    synthetic_die,
    __version__,
)

CONTACT_CLASSES = ("flat", "draft", "transition", "undercut")


def _config_text(config):
    if config is None:
        return ""
    return config if isinstance(config, str) else json.dumps(config)


def load(source):
    """Mesh from an STL path or STL bytes."""
    if isinstance(source, (bytes, bytearray)):
        return Mesh.from_stl_bytes(bytes(source))
    return Mesh.from_stl(str(source))


def contact_map(mesh, config=None):
    return json.loads(contact_map_json(mesh, _config_text(config)))


def segment(mesh, config=None):
    return json.loads(segmentation_json(mesh, _config_text(config)))


def associate(mesh, config=None):
    return json.loads(association_json(mesh, _config_text(config)))


def plan(mesh, config=None):
    return json.loads(plan_json(mesh, _config_text(config)))
