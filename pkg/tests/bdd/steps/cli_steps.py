# Copyright (c) 2026, lagbif contributors
# All rights reserved.
#
# Use of this source code is governed by the BSD 3-clause license found in
# the license.txt file at the root of this source tree.

import json
import logging
import os

from behave import given, then, when
from click.testing import CliRunner

from lagbif.__main__ import cli
from lagbif.bifurcation import BifurcationCurve, BifurcationDiagram, EndpointKind
from lagbif.utility.document import to_json


logger = logging.getLogger(__file__)

OUT = "out"


def invoke(context):
    """ Runs the command in an isolated filesystem and returns (result, written files). """
    with context.runner.isolated_filesystem():
        args = list(context.args)

        for name, text in context.prepared.items():
            with open(name, "w") as f:
                f.write(text)
        if context.config_text is not None:
            with open("run.ini", "w") as f:
                f.write(context.config_text)
            args.extend(["--config", "run.ini"])
        if args[0] != "version":
            args.extend(["--out", OUT])

        result = context.runner.invoke(cli, args)
        logger.debug("exit_code: %s, output: \'%s\'", result.exit_code, result.output)

        files = {}
        if os.path.isdir(OUT):
            for name in os.listdir(OUT):
                with open(os.path.join(OUT, name), "r", encoding="utf-8") as f:
                    files[name] = f.read()

    return result, files


@given('user types \'{command}\'')
def step_impl(context, command):
    args = command.split(' ')
    assert args[0] == 'lagbif'

    context.runner = CliRunner()
    context.args = args[1:]


@given('the run configuration')
def step_impl(context):
    context.config_text = context.text


@given('a stored diagram whose {first} and {second} strata overlap')
def step_impl(context, first, second):
    strata = [BifurcationCurve([int(v) for v in first.split(",")], [(0.0, 0.0), (1.0, 0.0)],
                               (EndpointKind.WINDOW_EXIT, EndpointKind.WINDOW_EXIT)),
              BifurcationCurve([int(v) for v in second.split(",")], [(0.5, 0.0), (1.5, 0.0)],
                               (EndpointKind.WINDOW_EXIT, EndpointKind.WINDOW_EXIT))]
    context.prepared["diagram.json"] = to_json(BifurcationDiagram(None, strata).to_document())


@when('the command runs')
def step_impl(context):
    context.result, context.files = invoke(context)


@then('the exit code is {exit_code:d}')
def step_impl(context, exit_code):
    assert context.result.exit_code == exit_code, context.result.output


@then('output contains \'{stdout_text}\'')
def step_impl(context, stdout_text):
    assert context.result.output is not None
    assert context.result.output.find(stdout_text) >= 0, context.result.output


@then('the files {names} are written')
def step_impl(context, names):
    for name in names.split(", "):
        assert name in context.files, "{0} missing from {1}".format(name, sorted(context.files))
        assert len(context.files[name]) > 0


@then('caustic.json lists {count:d} cusps and {components:d} components')
def step_impl(context, count, components):
    document = json.loads(context.files["caustic.json"])["caustic"]
    assert len(document["cusps"]) == count
    assert len(document["components"]) == components


@then('portrait.json lists {points:d} critical points, {saddles:d} saddles and {connections:d} connections')
def step_impl(context, points, saddles, connections):
    document = json.loads(context.files["portrait.json"])
    assert len(document["critical_points"]) == points
    assert document["census"][1] == saddles
    assert len(document["connections"]) == connections


@then('the manifest records the {command} command and version {version}')
def step_impl(context, command, version):
    document = json.loads(context.files["manifest.json"])
    assert document["command"] == command
    assert document["version"] == version


@then('a second run writes an identical {name}')
def step_impl(context, name):
    _, files = invoke(context)
    assert files[name] == context.files[name]


@then('portrait.json lists {points:d} critical points and {saddles:d} saddles')
def step_impl(context, points, saddles):
    document = json.loads(context.files["portrait.json"])
    assert len(document["critical_points"]) == points
    assert document["census"][1] == saddles


@then('diagram.json has a stratum along x2 = 0')
def step_impl(context):
    strata = json.loads(context.files["diagram.json"])["strata"]
    assert any(all(abs(v[1]) <= 1e-6 for v in s["polyline"]) for s in strata)
