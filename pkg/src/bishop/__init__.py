"""Grounded referring-expression resolution over synthetic cone scenes.

The engine renders scenes of green and purple cones, extracts visual
features from the raster alone, and resolves utterances like "the purple
one on the left" by composing word-level visual semantics during a partial
chart parse.
"""

from .composition import (
    ComposeContext,
    Concept,
    Epoch,
    RefKind,
    referents_group,
    referents_single,
    split_group,
)
from .lexicon import (
    ColourModel,
    GrammarRule,
    LexicalEntry,
    Lexicon,
    default_lexicon,
    fit_colour_model,
    load_lexicon,
    load_lexicon_file,
)
from .parser import Chart, Constituent, parse, tokenize
from .resolution import Consistency, Resolution, filter_candidates, resolve, select_referent
from .scene import (
    Raster,
    Scene,
    SceneObject,
    SceneState,
    generate_scene,
    load_scene,
    remove_object,
    render,
    save_scene,
    state_from_scene,
)
from .vision import GroupSet, VisionContext

__version__ = "0.1.0"

__all__ = [
    "Chart",
    "ColourModel",
    "ComposeContext",
    "Concept",
    "Consistency",
    "Constituent",
    "Epoch",
    "GrammarRule",
    "GroupSet",
    "LexicalEntry",
    "Lexicon",
    "Raster",
    "RefKind",
    "Resolution",
    "Scene",
    "SceneObject",
    "SceneState",
    "VisionContext",
    "default_lexicon",
    "filter_candidates",
    "fit_colour_model",
    "generate_scene",
    "load_lexicon",
    "load_lexicon_file",
    "load_scene",
    "parse",
    "referents_group",
    "referents_single",
    "remove_object",
    "render",
    "resolve",
    "save_scene",
    "select_referent",
    "split_group",
    "state_from_scene",
    "tokenize",
]
