"""Regenerates the frozen synthetic corpora used by the CLI tests.

    python3 generate.py

Output is deterministic. The corpora are small stand-ins for a citation
database export: three topical communities joined by one bridging author, so
centralities, h-indices and citation counts all vary.
"""

import random

HEADER = "paper_id,year,first_author,cited_authors\n"


def write(path, papers):
    with open(path, "w") as f:
        f.write(HEADER)
        for pid, year, first, cited in papers:
            f.write(f'{pid},{year},{first},"{";".join(cited)}"\n')


def generate(rng, n_papers, communities, shares, bridge, minors, bridge_rate, minor_rate):
    papers = []
    by_author = {}
    everyone = [a for c in communities for a, _ in c] + [bridge] + minors
    for i in range(n_papers):
        pid = f"P{i + 1:04d}"
        year = 1975 + (i * 33) // n_papers
        community = rng.choices(communities, shares)[0]
        names = [a for a, _ in community]
        weights = [w for _, w in community]
        k = rng.choice([1, 2, 2, 3, 3, 4])
        chosen = []
        for _ in range(k):
            chosen.append(rng.choices(names, weights)[0])
        if rng.random() < bridge_rate:
            chosen.append(bridge)
        if rng.random() < minor_rate:
            chosen.append(rng.choice(minors))
        refs = []
        for a in chosen:
            own = by_author.get(a, [])
            if own and rng.random() < 0.7:
                # earlier papers attract more citations
                idx = min(int(rng.expovariate(0.35)), len(own) - 1)
                refs.append(f"{a}@{own[idx]}")
            else:
                refs.append(a)
        first = rng.choice(everyone)
        by_author.setdefault(first, []).append(pid)
        papers.append((pid, year, first, refs))
    return papers


def citation_counts(papers):
    counts = {}
    for _, _, _, refs in papers:
        for a in {r.split("@")[0] for r in refs}:
            counts[a] = counts.get(a, 0) + 1
    return counts


def main():
    communities = [
        [("SALTON G", 9), ("ROBERTSON SE", 6), ("BELKIN NJ", 4), ("CROFT WB", 3), ("SPINK A", 2.2)],
        [("ABITEBOUL S", 5), ("ULLMAN JD", 3), ("CODD EF", 2)],
        [("RUI Y", 4), ("SMITH JR", 3)],
    ]
    minors = ["JANSEN BJ", "HULL R", "COX IJ", "FUHR N", "DATE CJ"]
    for seed in range(1, 500):
        rng = random.Random(seed)
        papers = generate(rng, 2400, communities, [5, 3, 2], "FALOUTSOS C", minors, 0.12, 0.25)
        counts = citation_counts(papers)
        selected = [c for a, c in counts.items() if c > 200]
        if len(selected) == 11 and len(set(selected)) == 11:
            write("synthetic_papers.csv", papers)
            print("synthetic_papers.csv seed", seed, sorted(counts.items(), key=lambda x: -x[1]))
            break

    five = [[("ALPHA A", 5), ("BRAVO B", 4), ("CHARLIE C", 3), ("DELTA D", 2.5), ("ECHO E", 2)]]
    for seed in range(1, 500):
        rng = random.Random(seed)
        papers = generate(rng, 900, five, [1], "ECHO E", ["MINOR M", "OTHER O"], 0.0, 0.3)
        counts = citation_counts(papers)
        selected = [c for a, c in counts.items() if c > 200]
        if len(selected) == 5 and len(set(selected)) == 5:
            write("five_authors.csv", papers)
            print("five_authors.csv seed", seed, sorted(counts.items(), key=lambda x: -x[1]))
            break


if __name__ == "__main__":
    main()
