"""Shared law corpus: named fixtures plus the seeded random families."""

import definetti as df

BERN_MIX = ((0.5, (0.7, 0.3)), (0.5, (0.3, 0.7)))
TRI_MIX = (
    (0.25, (0.6, 0.3, 0.1)),
    (0.5, (1 / 3, 1 / 3, 1 / 3)),
    (0.25, (0.1, 0.2, 0.7)),
)


def fixture_corpus():
    """Fresh named Polya/urn/mixture/iid fixtures."""
    return [
        ("polya(1,1) n=4", df.polya((1, 1), 4)),
        ("polya(1,1) n=5", df.polya((1, 1), 5)),
        ("polya(1,1) n=6", df.polya((1, 1), 6)),
        ("polya(2,1) n=5", df.polya((2, 1), 5)),
        ("polya(1,1,1) n=4", df.polya((1, 1, 1), 4)),
        ("polya(2,1,1) n=5", df.polya((2, 1, 1), 5)),
        ("urn(2,2) n=4", df.urn_without_replacement((2, 2), 4)),
        ("urn(3,2) n=4", df.urn_without_replacement((3, 2), 4)),
        ("urn(4,3) n=6", df.urn_without_replacement((4, 3), 6)),
        ("urn(2,2,2) n=5", df.urn_without_replacement((2, 2, 2), 5)),
        ("iid(0.3) n=5", df.iid((0.7, 0.3), 5)),
        ("iid uniform m=3 n=4", df.iid((1 / 3, 1 / 3, 1 / 3), 4)),
        ("bern mixture n=4", df.iid_mixture(BERN_MIX, 4)),
        ("bern mixture n=6", df.iid_mixture(BERN_MIX, 6)),
        ("bern mixture n=8", df.iid_mixture(BERN_MIX, 8)),
        ("tri mixture n=5", df.iid_mixture(TRI_MIX, 5)),
    ]


def dirichlet_corpus(seeds, ms=(2, 3), ns=(4, 5, 6, 7, 8)):
    return [
        (f"dirichlet seed={s} m={m} n={n}", df.random_dirichlet(s, m, n))
        for s in seeds
        for m in ms
        for n in ns
    ]
