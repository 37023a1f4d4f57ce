"""``pdcc`` command line client.

The CLI builds a request, sends it to the HTTP service (in process by default,
or a running server with ``--server URL``) and writes the answer as JSON or as
a human-readable table.  Exit codes: 0 success, 1 failed verification or
computation error, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .diffop import OpMatrix

COMMANDS = ("system", "resolve", "adjoint", "cc", "cohomology", "janet", "duality", "verify")


class UsageError(Exception):
    pass


class InProcessTransport:
    def __init__(self):
        with warnings.catch_warnings():
            # starlette warns about its httpx backend on import
            warnings.simplefilter("ignore")
            from fastapi.testclient import TestClient

        from .service.app import app

        self._client = TestClient(app, raise_server_exceptions=False)

    def post(self, path: str, body: dict):
        r = self._client.post(path, json=body)
        return r.status_code, r.json()


class HttpTransport:
    def __init__(self, url: str, timeout: float | None = None):
        import httpx

        self._client = httpx.Client(base_url=url, timeout=timeout)

    def post(self, path: str, body: dict):
        r = self._client.post(path, json=body)
        return r.status_code, r.json()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", metavar="URL", help="use a running pdcc service instead of the in-process one")
    common.add_argument("--out", metavar="FILE", help="write the JSON result here")
    common.add_argument("--format", choices=("json", "text"), help="stdout format")

    op = argparse.ArgumentParser(add_help=False)
    op.add_argument("--system", help="catalog system or fixture name (e.g. conformal-killing, S4)")
    op.add_argument("--dim", type=int, help="number of independent variables")
    op.add_argument("--metric", choices=("euclidean", "minkowski"), default="euclidean")
    op.add_argument("--in", dest="infile", metavar="FILE", help="OpMatrix JSON file")

    p = argparse.ArgumentParser(prog="pdcc", description="Exact compatibility conditions and resolutions of linear PDE operators.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("system", parents=[common, op], help="print an operator")
    r = sub.add_parser("resolve", parents=[common, op], help="free resolution by iterated CC")
    r.add_argument("--minimize", action="store_true", help="prune to a minimal resolution")
    r.add_argument("--max-length", type=int, metavar="K", help="step guard (default n+2)")
    r.add_argument("--emit-certificates", action="store_true", help="include exactness witnesses")
    a = sub.add_parser("adjoint", parents=[common, op], help="formal adjoint")
    a.add_argument("--sequence", action="store_true", help="also adjoint the whole resolution and test each junction")
    sub.add_parser("cc", parents=[common, op], help="generating compatibility conditions")
    c = sub.add_parser("cohomology", parents=[common, op], help="Spencer delta-cohomology dimension")
    c.add_argument("--s", type=int, required=True, help="form degree")
    c.add_argument("--r", type=int, default=0, help="prolongation level")
    j = sub.add_parser("janet", parents=[common, op], help="Janet board of the symbol")
    j.add_argument("--seed", type=int, default=0)
    j.add_argument("--attempts", type=int, default=10)
    sub.add_parser("duality", parents=[common, op], help="double-duality parametrization test")
    v = sub.add_parser("verify", parents=[common], help="run a claim suite")
    v.add_argument("--suite", default="all", help="appendix, formulas, duality or all")

    s = sub.add_parser("serve", help="run the HTTP service")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8000)
    return p


def _operator_body(args) -> dict:
    body = {"metric": args.metric}
    if args.infile is not None:
        if args.system is not None:
            raise UsageError("--in and --system are mutually exclusive")
        try:
            body["matrix_json"] = Path(args.infile).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.infile}: {exc.strerror}") from exc
    elif args.system is None:
        raise UsageError("one of --system or --in is required")
    else:
        body["system"] = args.system
    if args.dim is not None:
        body["dim"] = args.dim
    return body


def build_request(args) -> tuple[str, dict]:
    cmd = args.command
    if cmd == "verify":
        return "/verify", {"suite": args.suite}
    body = _operator_body(args)
    if cmd == "resolve":
        body.update(minimize=args.minimize, emit_certificates=args.emit_certificates)
        if args.max_length is not None:
            body["max_length"] = args.max_length
    elif cmd == "adjoint":
        body["sequence"] = args.sequence
    elif cmd == "cohomology":
        body.update(s=args.s, r=args.r)
    elif cmd == "janet":
        body.update(seed=args.seed, attempts=args.attempts)
    return "/" + cmd, body


def artifact(cmd: str, resp: dict, args) -> str:
    """Canonical JSON text of a response; matrices use the OpMatrix file format."""
    if cmd in ("system", "cc") or (cmd == "adjoint" and not args.sequence):
        return OpMatrix.from_json_obj(resp["matrix"]).to_json()
    if cmd == "verify":
        # timings vary between runs and stay out of the artifact
        resp = dict(resp, claims=[{k: v for k, v in c.items() if k != "seconds"} for c in resp["claims"]])
    return json.dumps(resp, sort_keys=True, indent=2)


def _matrix_text(obj: dict) -> str:
    return OpMatrix.from_json_obj(obj).to_text()


def render_text(cmd: str, resp: dict) -> str:
    if cmd == "verify":
        width = max((len(c["claim"]) for c in resp["claims"]), default=0)
        lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['claim']:<{width}}  [{c['source']}]  {c['seconds']:.2f}s"
                 for c in resp["claims"]]
        npass = sum(c["passed"] for c in resp["claims"])
        lines.append(f"{npass}/{len(resp['claims'])} claims passed")
        return "\n".join(lines)
    if cmd == "janet":
        out = [resp["board"], f"alpha = {resp['alpha']}", f"involutive = {resp['involutive']}"]
        if "sequence_ranks" in resp:
            out.append(f"sequence ranks = {resp['sequence_ranks']}")
        return "\n".join(out)
    if cmd == "resolve":
        out = [f"betti = {resp['betti']}", f"orders = {resp['orders']}",
               f"euler characteristic = {resp['euler_characteristic']}"]
        for k, step in enumerate(resp["steps"], 1):
            out.append(f"step {k} ({step['rows']} x {step['cols']}):")
            out.append(_matrix_text(step))
        return "\n".join(out)
    if cmd == "cohomology":
        return "  ".join(f"{k} = {resp[k]}" for k in ("s", "r", "dim_C", "dim_B", "dim_Z", "dim_H"))
    if cmd == "duality":
        out = [f"exact = {resp['exact']}"]
        if resp.get("parametrization"):
            out += ["parametrization:", _matrix_text(resp["parametrization"])]
        for w in resp["torsion_witnesses"]:
            n = resp["input"]["n"]
            out.append("torsion witness: " + _matrix_text({"n": n, "rows": 1, "cols": len(w), "entries": [w]}))
        return "\n".join(out)
    text = resp["text"]
    if cmd == "adjoint" and "exact" in resp:
        text += f"\nadjoint junctions exact = {resp['exact']}"
    return text


def run(argv: list[str] | None = None, transport=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    try:
        path, body = build_request(args)
    except UsageError as exc:
        print(f"pdcc: error: {exc}", file=sys.stderr)
        return 2
    if transport is None:
        transport = HttpTransport(args.server) if args.server else InProcessTransport()
    status, resp = transport.post(path, body)
    if status != 200:
        if status in (400, 422):
            msg = resp.get("message") or json.dumps(resp.get("detail"))
            pos = resp.get("position")
            where = f" at {pos}" if pos else ""
            print(f"pdcc: error{where}: {msg}", file=sys.stderr)
            return 2
        print(f"pdcc: error: {resp.get('message', resp)}", file=sys.stderr)
        return 1
    fmt = args.format or ("text" if args.command == "verify" else "json")
    data = artifact(args.command, resp, args)
    if args.out:
        Path(args.out).write_text(data + "\n")
    if fmt == "json":
        if not args.out:
            print(data)
    else:
        print(render_text(args.command, resp))
    if args.command == "verify" and not resp["passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
