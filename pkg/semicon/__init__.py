"""
Semicon: capacity, bounds and encoders for semiconstrained systems.

A semiconstrained system admits every word in which each forbidden pattern
occurs with frequency at most its cap. This package counts and tests such
words, computes the capacity of the weak system as a convex program, brackets
it with closed-form bounds, synthesizes the capacity-achieving Markov chain
and encodes uniform bits into admissible words through that chain.

Package Structure:
    semicon.words: Words, constraint specs, frequencies, membership, enumeration
    semicon.measures: k-tuple measures, shift invariance, rate function, f-map
    semicon.capacity: Capacity solver (dual and mirror-descent methods)
    semicon.bounds: Janson upper bound, explicit lower bound, asymptotics
    semicon.markov: De Bruijn graphs, chain synthesis, circulation rounding
    semicon.arithmetic: Integer binary arithmetic coder
    semicon.codec: Partition, biasing, graph walk, decoding, simulation
    semicon.formats: Report writers (csv, json, txt)

    semicon.__main__: Command-line interface

Usage:
    From command line:
        semicon capacity --rll 2 --cap 1/20
        semicon bounds --k 2 --p-grid 0:1/8:1/80

    As module:
        python -m semicon simulate --rll 2 --cap 1/20 --n 4096 --trials 50

License: AGPL-3.0-or-later
"""
