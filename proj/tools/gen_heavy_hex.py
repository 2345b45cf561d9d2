#!/usr/bin/env python3
"""Writes a 156-qubit heavy-hex chip file laid out like IBM's Heron r2
devices (ibm_fez): 8 rows of 16 qubits joined by 7 rows of 4 bridge
qubits. Bridges sit at columns 3,7,11,15 below even rows and 1,5,9,13
below odd rows. Calibration values are synthetic but deterministic.

Run with --check to print node/edge/degree counts instead of JSON.
"""
import json
import random
import sys

ROWS, COLS, BRIDGES = 8, 16, 4


def build():
    edges = []
    qubit = lambda row, col: row * (COLS + BRIDGES) + col
    for row in range(ROWS):
        for col in range(COLS - 1):
            edges.append((qubit(row, col), qubit(row, col + 1)))
        if row + 1 < ROWS:
            cols = (3, 7, 11, 15) if row % 2 == 0 else (1, 5, 9, 13)
            for k, col in enumerate(cols):
                bridge = row * (COLS + BRIDGES) + COLS + k
                edges.append((qubit(row, col), bridge))
                edges.append((bridge, qubit(row + 1, col)))
    n = ROWS * COLS + (ROWS - 1) * BRIDGES
    return n, sorted(tuple(sorted(e)) for e in edges)


def check(n, edges):
    adj = {q: set() for q in range(n)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen, stack = {0}, [0]
    while stack:
        q = stack.pop()
        for r in adj[q] - seen:
            seen.add(r)
            stack.append(r)
    degrees = [len(adj[q]) for q in range(n)]
    print(f"qubits={n} edges={len(edges)} unique_edges={len(set(edges))} "
          f"connected={len(seen) == n} max_degree={max(degrees)} "
          f"degree3={degrees.count(3)} degree1={degrees.count(1)}")


def main():
    n, edges = build()
    if "--check" in sys.argv:
        check(n, edges)
        return
    rng = random.Random(156)
    qubits = []
    for q in range(n):
        t1 = round(rng.uniform(80.0, 250.0), 3)
        t2 = round(min(2 * t1, rng.uniform(40.0, 200.0)), 3)
        qubits.append({"id": q, "t1_us": t1, "t2_us": t2,
                       "readout_error": round(rng.uniform(0.004, 0.05), 5)})
    doc = {"name": "heavy-hex-156", "qubits": qubits, "edges": [list(e) for e in edges]}
    json.dump(doc, sys.stdout, indent=1)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
