"""Score request routes against a vehicle route, step by step.

Builds a short vehicle corridor and three requests: an exact copy, a
parallel road one block north, and a road in a different part of town.
For each pair the script prints the matched segments (which vehicle point
each request point latched onto, and at what distance) and the resulting
similarity score in meters. Lower is better; routes that never run
together get no score at all.
"""

import math

from dlcss import Coordinate, Route, compute_dlcss


def corridor(lat, rid, lon0=6.0, n=8):
    pts = tuple(Coordinate(lat, lon0 + 0.01 * k) for k in range(n))
    return Route(rid, pts)


def describe(title, a, r):
    res = compute_dlcss(a, r)
    print(f"\n{title}")
    for s in res.segments[:5]:
        print(f"  vehicle point {s.a_index} <- request point {s.r_index}:"
              f" {s.distance_m:8.1f} m apart")
    if len(res.segments) > 5:
        print(f"  ... {len(res.segments) - 5} more segments")
    print(f"  matched vehicle stretch: {res.l_sub_a_m:.0f} m of {res.l_a_m:.0f} m")
    if math.isfinite(res.sm):
        print(f"  similarity score: {res.sm:.1f} m")
    else:
        print("  similarity score: no overlap, the routes never run together")


def main():
    vehicle = corridor(50.75, "vehicle")
    describe("request identical to the vehicle route", vehicle,
             corridor(50.75, "copy"))
    describe("request on a parallel road about 111 m north", vehicle,
             corridor(50.751, "parallel"))
    # a north-south road far east of the corridor: every request point is
    # nearest to the corridor's last point, so no stretch is shared
    elsewhere = Route("elsewhere", tuple(
        Coordinate(50.75 + 0.01 * k, 6.2) for k in range(4)
    ))
    describe("request on a crossing road far away", vehicle, elsewhere)


if __name__ == "__main__":
    main()
