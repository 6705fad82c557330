#!/usr/bin/env python3
"""Send heading/depth references to a running seashark-station.

    backseat_client.py --heading 90 --depth 3 --rate 2 --duration 20

Messages are posted to /backseat, one JSON object per request. Stop sending
and the station reverts to the mission after its stale timeout.
"""
import argparse
import json
import sys
import time
import urllib.error
import urllib.request


def status(base):
    with urllib.request.urlopen(base + "/status", timeout=5) as r:
        return json.load(r)


def post(base, msg):
    req = urllib.request.Request(base + "/backseat", data=json.dumps(msg).encode(),
                                 headers={"Content-Type": "application/json"}, method="POST")
    try:
        with urllib.request.urlopen(req, timeout=5) as r:
            return r.status, json.load(r)
    except urllib.error.HTTPError as e:
        return e.code, json.load(e)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--url", default="http://127.0.0.1:8080")
    ap.add_argument("--session", default="backseat")
    ap.add_argument("--heading", type=float)
    vert = ap.add_mutually_exclusive_group()
    vert.add_argument("--depth", type=float)
    vert.add_argument("--altitude", type=float)
    ap.add_argument("--rate", type=float, default=1.0, help="messages per wall-clock second")
    ap.add_argument("--duration", type=float, default=10.0, help="wall-clock seconds")
    args = ap.parse_args()
    if args.heading is None and args.depth is None and args.altitude is None:
        ap.error("give at least one of --heading, --depth, --altitude")

    end = time.monotonic() + args.duration
    while time.monotonic() < end:
        msg = {"session": args.session, "timestamp": status(args.url)["sim_time"]}
        if args.heading is not None:
            msg["heading_deg"] = args.heading
        if args.depth is not None:
            msg["depth_m"] = args.depth
        if args.altitude is not None:
            msg["altitude_m"] = args.altitude
        code, body = post(args.url, msg)
        if code != 200:
            print(f"{code} {body.get('code')}: {body.get('message')}", file=sys.stderr)
        time.sleep(1.0 / args.rate)


if __name__ == "__main__":
    main()
