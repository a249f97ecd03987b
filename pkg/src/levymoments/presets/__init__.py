"""Specs used by the acceptance criteria, shipped as JSON files AC1.json .. AC10.json."""

from importlib import resources

from ..triplet import ProcessSpec


def preset_names():
    files = resources.files(__name__).iterdir()
    names = [f.name[:-5] for f in files if f.name.endswith(".json")]
    return sorted(names, key=lambda n: (len(n), n))


def preset_text(name):
    path = resources.files(__name__).joinpath(f"{name}.json")
    if not path.is_file():
        raise KeyError(f"no preset named {name!r}; available: {preset_names()}")
    return path.read_text()


def load_preset(name):
    return ProcessSpec.from_json(preset_text(name))
