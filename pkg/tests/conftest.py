import pytest

from paramark.modelio import parse_model


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the exhaustive suites too")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="exhaustive suite, needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


KNUTH_YAO = """\
# two-coin die; both coins biased
@type pmc
@params x y
@states s0 s1 s2 s3 s4 s5 s6 one two three four five six
@init s0
@targets two
s0 -> s1 : x
s0 -> s2 : 1 - x
s1 -> s3 : y
s1 -> s4 : 1 - y
s2 -> s5 : y
s2 -> s6 : 1 - y
s3 -> s1 : x
s3 -> one : 1 - x
s4 -> two : 1 - x
s4 -> three : x
s5 -> s2 : x
s5 -> four : 1 - x
s6 -> five : 1 - x
s6 -> six : x
one -> one : 1
two -> two : 1
three -> three : 1
four -> four : 1
five -> five : 1
six -> six : 1
"""

TWO_COINS = """\
@type pmc
@params x y
@states s0 s1 s2 s3
@init s0
@targets s2
s0 -> s1 : x
s0 -> s2 : 1 - x
s1 -> s2 : y
s1 -> s3 : 1 - y
s2 -> s2 : 1
s3 -> s3 : 1
"""

TWO_COINS_PMDP = """\
@type pmdp
@params x y
@states s0 s1 s2 s3
@actions alpha beta
@init s0
@targets s2
s0 [alpha] -> s1 : x
s0 [alpha] -> s2 : 1 - x
s0 [beta] -> s2 : 1 - y
s0 [beta] -> s3 : y
s1 [alpha] -> s2 : y
s1 [alpha] -> s3 : 1 - y
s2 [alpha] -> s2 : 1
s3 [alpha] -> s3 : 1
"""

UNREALISABLE = """\
@type pmc
@params x
@states s0 s1 s2
@init s1
@targets s0
s1 -> s0 : 2 - x
s1 -> s2 : -x
s0 -> s0 : 1
s2 -> s2 : 1
"""

ROCK_PAPER_SCISSORS = """\
# win two rounds in a row against a biased opponent
@type pmdp
@params xR xP xS xR' xP' xS'
@states c0 c1 W L
@actions R P S
@init c0
@targets W
c0 [R] -> c0 : xR
c0 [R] -> c1 : xP
c0 [R] -> L : xS
c0 [P] -> c0 : xP
c0 [P] -> c1 : xS
c0 [P] -> L : xR
c0 [S] -> c0 : xS
c0 [S] -> c1 : xR
c0 [S] -> L : xP
c1 [R] -> c0 : xR'
c1 [R] -> W : xP'
c1 [R] -> L : xS'
c1 [P] -> c0 : xP'
c1 [P] -> W : xS'
c1 [P] -> L : xR'
c1 [S] -> c0 : xS'
c1 [S] -> W : xR'
c1 [S] -> L : xP'
W [R] -> W : 1
L [R] -> L : 1
"""

ZERO_SETS_PMDP = """\
@type pmdp
@params x
@states s0 s1 s2 s3 s4 s6 s7
@actions a b
@init s0
@targets s3
s0 [a] -> s1 : x
s0 [a] -> s2 : 1 - x
s0 [b] -> s2 : 1/3
s0 [b] -> s4 : 1/3
s0 [b] -> s3 : 1/3
s1 [a] -> s3 : 1/2
s1 [a] -> s0 : 1/2
s2 [a] -> s2 : 1
s3 [a] -> s3 : 1
s4 [a] -> s7 : 1
s6 [a] -> s6 : x
s6 [a] -> s3 : 1 - x
s7 [a] -> s7 : 1/2
s7 [a] -> s4 : 1/2
s7 [b] -> s3 : 1 - x
s7 [b] -> s6 : x
"""

# value 1/2*x^2 + 1/3*y
SQUARE_PLUS_LINEAR = """\
@type pmc
@params x y
@states s0 a a2 b goal sink
@init s0
@targets goal
s0 -> a : 1/2
s0 -> b : 1/3
s0 -> sink : 1/6
a -> a2 : x
a -> sink : 1 - x
a2 -> goal : x
a2 -> sink : 1 - x
b -> goal : y
b -> sink : 1 - y
goal -> goal : 1
sink -> sink : 1
"""


@pytest.fixture
def knuth_yao():
    return parse_model(KNUTH_YAO)


@pytest.fixture
def two_coins():
    return parse_model(TWO_COINS)


@pytest.fixture
def two_coins_pmdp():
    return parse_model(TWO_COINS_PMDP)


@pytest.fixture
def unrealisable():
    return parse_model(UNREALISABLE)


@pytest.fixture
def rps():
    return parse_model(ROCK_PAPER_SCISSORS)


@pytest.fixture
def zero_sets_pmdp():
    return parse_model(ZERO_SETS_PMDP)


@pytest.fixture
def square_plus_linear():
    return parse_model(SQUARE_PLUS_LINEAR)


@pytest.fixture
def write_file(tmp_path):
    """Write text under tmp_path and return the path as a string."""
    def write(name: str, text: str) -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


@pytest.fixture
def fake_solver(tmp_path):
    """A shell script standing in for a solver binary that prints fixed output."""
    def make(output: str, delay: int = 0) -> str:
        path = tmp_path / "fake-solver"
        body = "#!/bin/sh\n"
        if delay:
            body += f"exec sleep {delay}\n"
        body += "cat <<'EOF'\n" + output + "EOF\n"
        path.write_text(body)
        path.chmod(0o755)
        return str(path)

    return make
