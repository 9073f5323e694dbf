"""Correlated Pauli memory channels, repetition/DFS codes and entanglement fidelity."""
