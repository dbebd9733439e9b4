"""Brute-force reference implementations, written from the definitions only."""

import math


def near_miss_oracle(press_times, ladder, level_index, min_count):
    """Enumerate every contiguous run of presses and keep the maximal bursts.

    Returns the list of (fire_time, press_times_of_attempt, max_gap).
    """
    slowest = ladder[2]
    current = ladder[level_index]
    n = len(press_times)
    bursts = []
    for i in range(n):
        for j in range(i, n):
            inner_ok = all(press_times[k + 1] - press_times[k] <= slowest for k in range(i, j))
            if not inner_ok:
                break
            left_closed = i == 0 or press_times[i] - press_times[i - 1] > slowest
            right_closed = j == n - 1 or press_times[j + 1] - press_times[j] > slowest
            if left_closed and right_closed:
                bursts.append(press_times[i:j + 1])
    bursts.sort(key=lambda b: b[0])
    out = []
    count = 0
    for burst in bursts:
        if len(burst) not in (2, 3):
            continue
        gaps = [burst[k + 1] - burst[k] for k in range(len(burst) - 1)]
        g = max(gaps)
        if current < g <= slowest:
            count += 1
            if count == min_count:
                out.append((burst[-1], list(burst), g))
                count = 0
    return out


def statistical_oracle(samples, mean, stddev, k, sides, min_samples):
    """First index (1-based) whose prefix mean deviates, recomputing each prefix from scratch."""
    for i in range(min_samples, len(samples) + 1):
        mu = math.fsum(samples[:i]) / i
        if stddev == 0:
            hit = {"above": mu > mean, "below": mu < mean, "both": mu != mean}[sides]
        else:
            d = mu - mean
            hit = {"above": d >= k * stddev, "below": -d >= k * stddev, "both": abs(d) >= k * stddev}[sides]
        if hit:
            return i
    return None
