"""Every CLI command over the built-in catalog, as argv lists."""

import io

from nildolbeault.catalog import builtin_names, load_builtin
from nildolbeault.cli import run


def sweep_commands(max_abelian=6):
    cmds = [["catalog", "list", "--json"]]
    for name in builtin_names(max_abelian):
        e = load_builtin(name)
        base = ["--input", name, "--json"]
        cmds += [["catalog", "show", name, "--json"], ["validate"] + base,
                 ["cohomology"] + base]
        if e.J is None or e.counterexample:
            cmds.append(["moduli-check"] + base)
            continue
        for module in ("trivial", "adjoint"):
            mb = base + ["--module", module]
            cmds += [["cohomology", "--representatives"] + mb, ["hodge"] + mb, ["serre-check"] + mb]
        cmds += [["kuranishi", "--order", "4"] + base, ["moduli-check"] + base]
    return cmds


def run_capture(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()
