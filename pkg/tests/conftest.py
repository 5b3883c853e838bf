from pathlib import Path

import pytest

from divsum.textprep import TextPreprocessor

FIXTURES = Path(__file__).parent / "fixtures"


def read_fixture(*parts) -> str:
    return FIXTURES.joinpath(*parts).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def sanguessugas_raw():
    return read_fixture("cstnews", "sanguessugas.txt")


@pytest.fixture(scope="session")
def sanguessugas(sanguessugas_raw):
    return TextPreprocessor(language="pt").make_document(sanguessugas_raw, "S")


@pytest.fixture(scope="session")
def congo_raws():
    return [read_fixture("congo", f"T{i}.txt") for i in (1, 2, 3)]


@pytest.fixture(scope="session")
def congo(congo_raws):
    return TextPreprocessor(language="pt").make_cluster(congo_raws, "congo")


@pytest.fixture(scope="session")
def transcript_raw():
    return read_fixture("transcripts", "fr_call.txt")


@pytest.fixture(scope="session")
def multilang_docs():
    docs = []
    for p in sorted((FIXTURES / "multilang").glob("*.txt")):
        prep = TextPreprocessor(language=p.stem[:2])
        docs.append(prep.make_document(p.read_text(encoding="utf-8"), p.stem))
    return docs


# -- acceptance report --------------------------------------------------------

_ACCEPTANCE: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): one of the numbered acceptance criteria")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    number, title = mark.args
    detail = item.funcargs.get("record", {}).get("detail", "")
    ok = rep.passed and _ACCEPTANCE.get(number, (True,))[0]
    _ACCEPTANCE[number] = (ok, title, detail)


@pytest.fixture
def record():
    """A dict whose "detail" entry ends up on the acceptance summary line."""
    return {}


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, title, detail = _ACCEPTANCE[number]
        line = f"#{number} {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
