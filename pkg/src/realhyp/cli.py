"""Command line client for the classification service.

Every command talks to the service application through an in-memory
transport, so the CLI needs no network and behaves identically to a
deployed server.  Exit codes: 0 success, 1 verification failure, 2 usage
error.
"""

from __future__ import annotations

import asyncio
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import click
import httpx

from . import __version__
from .service import app

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2


@dataclass(frozen=True)
class CliConfig:
    """Resolved options of one invocation."""

    command: str
    slot_id: Optional[str] = None
    format: str = "text"
    out: Optional[str] = None
    tol: float = 1e-12
    parallel: bool = False
    quiet: bool = False

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")


def call_service(
    method: str, path: str, json_body=None, params=None
) -> httpx.Response:
    """One in-process request against the service application."""

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://service.internal"
        ) as client:
            return await client.request(method, path, json=json_body, params=params)

    return asyncio.run(go())


def deliver(content: str, config: CliConfig, label: str) -> None:
    """Write the content to the requested file, or print it."""
    if config.out is not None:
        Path(config.out).write_text(content, encoding="utf-8", newline="")
        if not config.quiet:
            click.echo(f"wrote {label} to {config.out}")
    elif not config.quiet:
        click.echo(content, nl=not content.endswith("\n"))


def cmd_verify(config: CliConfig) -> int:
    response = call_service(
        "POST",
        "/verify",
        json_body={"parallel": config.parallel, "format": config.format},
    )
    data = response.json()
    deliver(data["content"], config, f"verification report ({config.format})")
    return EXIT_OK if data["ok"] else EXIT_VERIFICATION_FAILED


def _classify_text(data: dict) -> str:
    lines = [
        f"slot {data['id']} [{data['section']}]",
        f"G={data['g']}  Ghat={data['g_hat']}  split={data['split']}",
        f"expected S(R)={data['expected']}  computed S(R)={data['computed']}"
        f"  pass={data['passed']}",
        f"antiholomorphic lifts: {data['lift_count']}"
        f"  involutive classes: {data['involutive_classes']}",
        f"nu on first curve: {data['nu_e']}  nu on second curve: {data['nu_f']}",
        f"rotation fixed-set actions: {data['fix_g_action']}",
    ]
    for kind, flags in data["eig_flags"]:
        lines.append(f"eigenvector flags [{kind}]: {list(flags)}")
    if data["failures"]:
        lines.append("failures: " + "; ".join(data["failures"]))
    if data["flagged"]:
        lines.append("note: ambiguous cell pairing, most local reading")
    return "\n".join(lines) + "\n"


def cmd_classify(config: CliConfig) -> int:
    response = call_service("GET", f"/slots/{config.slot_id}")
    if response.status_code == 404:
        raise click.UsageError(f"unknown slot {config.slot_id!r}")
    data = response.json()
    if config.format == "json":
        content = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    else:
        content = _classify_text(data)
    deliver(content, config, f"slot report for {data['id']}")
    return EXIT_OK if data["passed"] else EXIT_VERIFICATION_FAILED


def _moduli_text(data: dict) -> str:
    lines = ["compatible symmetry pairs and their complex structures"]
    for index, case in enumerate(data["cases"], start=1):
        lines.append(
            f"case {index}: zeta={case['zeta']} B={case['b']}"
            f" relation={case['relation']}"
        )
        if case["kind"] == "TwoIsolatedPoints":
            points = " and ".join(str(p) for p in case["points"])
            lines.append(f"  TwoIsolatedPoints: {points}")
        else:
            lines.append(
                f"  {case['kind']}: shape={case['shape']}"
                f" samples={','.join(case['samples'])}"
            )
        lines.append(
            f"  residual={case['residual']:.3e}  verified={case['verified']}"
        )
    demo = data["demo"]
    lines.append(
        f"single-curve family: {demo['kind']} shape={demo['shape']}"
        f" residual={demo['residual']:.3e} verified={demo['verified']}"
    )
    lines.append(f"note: {demo['note']}")
    lines.append(f"all verified: {data['all_verified']}")
    return "\n".join(lines) + "\n"


def cmd_moduli(config: CliConfig) -> int:
    response = call_service("GET", "/moduli", params={"tol": config.tol})
    data = response.json()
    if config.format == "json":
        content = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    else:
        content = _moduli_text(data)
    deliver(content, config, "moduli report")
    return EXIT_OK if data["all_verified"] else EXIT_VERIFICATION_FAILED


def _bdf_text(data: dict) -> str:
    lines = ["holomorphic group cases"]
    for case in data["cases"]:
        lines.append(
            f"case {case['case']}: group={case['group']} order={case['order']}"
            f" rotation_order={case['rotation_order']}"
            f" example={case['example_slot']} ok={case['ok']}"
        )
        failing = [name for name, ok in case["checks"].items() if not ok]
        if failing:
            lines.append("  failing checks: " + ", ".join(failing))
    lines.append(f"all validated: {data['all_ok']}")
    return "\n".join(lines) + "\n"


def cmd_bdf(config: CliConfig) -> int:
    response = call_service("GET", "/bdf")
    data = response.json()
    if config.format == "json":
        content = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    else:
        content = _bdf_text(data)
    deliver(content, config, "group case report")
    return EXIT_OK if data["all_ok"] else EXIT_VERIFICATION_FAILED


def cmd_export(config: CliConfig) -> int:
    response = call_service(
        "GET", "/catalog/export", params={"format": config.format}
    )
    data = response.json()
    Path(config.out).write_text(data["content"], encoding="utf-8", newline="")
    if not config.quiet:
        click.echo(f"wrote {config.format} report to {config.out}")
    return EXIT_OK


@click.group()
@click.version_option(__version__, prog_name="realhyp")
def main() -> None:
    """Classification reports for real structures on bielliptic surfaces."""


@main.command()
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json", "csv", "md"]),
    default="text",
    show_default=True,
    help="Rendering of the verification report.",
)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--parallel", is_flag=True, help="Verify slots across workers.")
@click.option("--quiet", is_flag=True)
def verify(fmt: str, out: Optional[str], parallel: bool, quiet: bool) -> None:
    """Rebuild every catalog slot and check the global invariants."""
    config = CliConfig(
        command="verify", format=fmt, out=out, parallel=parallel, quiet=quiet
    )
    sys.exit(cmd_verify(config))


@main.command()
@click.option("--slot", "slot_id", required=True, help="Catalog slot id.")
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--quiet", is_flag=True)
def classify(slot_id: str, fmt: str, out: Optional[str], quiet: bool) -> None:
    """Report the group data and real-part topology of one slot."""
    config = CliConfig(
        command="classify", slot_id=slot_id, format=fmt, out=out, quiet=quiet
    )
    sys.exit(cmd_classify(config))


@main.command()
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--quiet", is_flag=True)
def moduli(tol: float, fmt: str, out: Optional[str], quiet: bool) -> None:
    """Enumerate compatible symmetry pairs and solve for complex structures."""
    try:
        config = CliConfig(
            command="moduli", format=fmt, out=out, tol=tol, quiet=quiet
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    sys.exit(cmd_moduli(config))


@main.command()
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--quiet", is_flag=True)
def bdf(fmt: str, out: Optional[str], quiet: bool) -> None:
    """Instantiate and validate the seven holomorphic group cases."""
    config = CliConfig(command="bdf", format=fmt, out=out, quiet=quiet)
    sys.exit(cmd_bdf(config))


@main.command()
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["json", "csv", "md"]),
    default="json",
    show_default=True,
)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
@click.option("--quiet", is_flag=True)
def export(fmt: str, out: str, quiet: bool) -> None:
    """Write the verification report to a file."""
    config = CliConfig(command="export", format=fmt, out=out, quiet=quiet)
    sys.exit(cmd_export(config))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host: str, port: int) -> None:
    """Run the HTTP service on a real socket."""
    import uvicorn

    uvicorn.run("realhyp.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
