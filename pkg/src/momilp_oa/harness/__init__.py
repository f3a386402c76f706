"""Command line, benchmarks, reports and the brute-force reference."""
