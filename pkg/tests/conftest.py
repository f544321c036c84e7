import pytest

from bishop import default_lexicon
from bishop.scene import Scene, SceneObject, state_from_scene


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


def make_scene(objects, seed=0, size=512):
    """Hand-placed scene: objects are (id, x, y, colour) tuples."""
    return Scene(seed=seed, width=size, height=size, objects=tuple(
        SceneObject(id=i, x=x, y=y, colour=c) for i, x, y, c in objects))


def make_state(objects, seed=0, size=512):
    return state_from_scene(make_scene(objects, seed=seed, size=size))
