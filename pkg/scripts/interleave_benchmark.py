#!/usr/bin/env python3
"""Gate-count / depth table across interleave strategies, including the
state-prep benchmark circuit (transform, barrier, inverse transform) whose
gate cancellation the barrier precludes.
"""
import argparse

from fermispec.circuits import Circuit, barrier, invert, two_qubit_count, \
    two_qubit_depth
from fermispec.fft import (InterleaveStrategy, fft_circuit, interleave_circuit,
                           interleave_cz_graph, interleave_permutation)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--modes", type=int, default=27)
    ap.add_argument("--radix", type=int, default=3)
    args = ap.parse_args()

    n, r = args.modes, args.radix
    perm = interleave_permutation(n, r)
    print(f"N={n} radix={r}: inversion graph has "
          f"{interleave_cz_graph(perm).num_edges} edges")
    header = (f"{'strategy':16} {'interleave':>12} {'i-depth':>8} "
              f"{'fft':>8} {'f-depth':>8} {'bench':>8} {'b-depth':>8}")
    print(header)
    for strat in InterleaveStrategy:
        if strat is InterleaveStrategy.IMPORTED_SEQUENCE and (
                r != 3 or n not in (9, 27)):
            continue
        inter = interleave_circuit(perm, strat)
        fft = fft_circuit(n, r, strat)
        bench = Circuit(n, fft.gates + (barrier(),) + invert(fft).gates)
        print(f"{strat.value:16} {two_qubit_count(inter):12d} "
              f"{two_qubit_depth(inter):8d} {two_qubit_count(fft):8d} "
              f"{two_qubit_depth(fft):8d} {two_qubit_count(bench):8d} "
              f"{two_qubit_depth(bench):8d}")


if __name__ == "__main__":
    main()
