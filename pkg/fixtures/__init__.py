from .fixture_corpus import Fixture
from .fixture_corpus import fixture_phase
from .fixture_corpus import generate_fixture
from .fixture_corpus import load_manifest
from .fixture_corpus import MANIFEST_PATH
from .fixture_corpus import regenerate_fixtures
