"""Rescue a rejected ride request by rerouting it through a meeting point.

A vehicle crosses the grid west to east along the middle row; the request
runs along the northern edge. Scored directly, the request lands above the
acceptance threshold. Asking the rider to walk to one of three candidate
pickup points and rerouting from there brings one candidate under the
threshold, and that is the one the evaluation picks.
"""

from dlcss import (
    GridGraph,
    MeetingPoint,
    evaluate_meeting_points,
    score_pair,
    shortest_route,
)

THRESHOLD_M = 5000.0


def main():
    g = GridGraph.build(rows=12, cols=12, removal_fraction=0.0, seed=0)

    def node(row, col):
        return g.node(row * 12 + col)

    vehicle = shortest_route(g, node(6, 0), node(6, 11))
    request = shortest_route(g, node(0, 2), node(0, 9))
    candidates = [
        MeetingPoint("corner-shop", node(5, 3), label="one block off the corridor"),
        MeetingPoint("midfield", node(2, 6), label="halfway between the roads"),
        MeetingPoint("north-east", node(0, 11), label="on the request's own road"),
    ]

    direct = score_pair(vehicle, request)
    print(f"direct score: {direct:.1f} m against a threshold of {THRESHOLD_M:.0f} m")
    print("the request is rejected as-is\n")

    match = evaluate_meeting_points(
        vehicle, request, candidates,
        route_provider=lambda origin, dest: shortest_route(g, origin, dest),
        threshold_m=THRESHOLD_M,
    )
    if match is None:
        print("no meeting point helps")
        return
    picked = next(m for m in candidates if m.id == match.meeting_point_id)
    print(f"best meeting point: {picked.id} ({picked.label})")
    print(f"rerouted score: {match.sm:.1f} m, accepted")
    print(f"rerouted request has {len(match.rerouted_request.points)} points,"
          f" ending at the original destination")


if __name__ == "__main__":
    main()
