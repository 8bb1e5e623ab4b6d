import json
from importlib import resources

import pytest

from adaptcourse.content import ingest_course
from adaptcourse.instrument import default_instrument


@pytest.fixture(scope="session")
def instrument():
    return default_instrument()


@pytest.fixture(scope="session")
def demo_course_doc():
    data = resources.files("adaptcourse").joinpath("data", "demo_course.json")
    return json.loads(data.read_text(encoding="utf-8"))


@pytest.fixture()
def demo_course(demo_course_doc):
    return ingest_course(demo_course_doc)
