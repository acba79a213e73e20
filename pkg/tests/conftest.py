import pytest

from querycause.worked_examples import JOIN_PAIRS, PATH_GRAPH, UNIVERSITY

from randgen import BOOLEAN_PROGRAMS, CQ_PROGRAMS, GENERAL_PROGRAMS, make_cases


@pytest.fixture(scope="session")
def path_example():
    return PATH_GRAPH.program(), PATH_GRAPH.instance(), PATH_GRAPH.answer


@pytest.fixture(scope="session")
def join_example():
    return JOIN_PAIRS.program(), JOIN_PAIRS.instance(), JOIN_PAIRS.answer


@pytest.fixture(scope="session")
def university_example():
    return (
        UNIVERSITY.program(),
        UNIVERSITY.instance(),
        UNIVERSITY.answer,
        UNIVERSITY.constraints(),
    )


# Shared randomized beds.  Session scope keeps generation cost paid once;
# seeds are fixed so every run sees the same cases.

@pytest.fixture(scope="session")
def boolean_cases():
    return make_cases(BOOLEAN_PROGRAMS, 210, seed=96001, max_endo=7, allow_exogenous=False)


@pytest.fixture(scope="session")
def mixed_boolean_cases():
    return make_cases(BOOLEAN_PROGRAMS, 60, seed=96002, max_endo=6, allow_exogenous=True)


@pytest.fixture(scope="session")
def general_cases():
    return make_cases(GENERAL_PROGRAMS, 150, seed=96003, max_endo=6, allow_exogenous=False)


@pytest.fixture(scope="session")
def mixed_general_cases():
    return make_cases(GENERAL_PROGRAMS, 60, seed=96004, max_endo=5, allow_exogenous=True)


@pytest.fixture(scope="session")
def cq_cases():
    return make_cases(CQ_PROGRAMS, 200, seed=96005, max_endo=6, allow_exogenous=False)
