# -*- coding: utf-8 -*-
#
# Copyright (C) 2024 Laurent Bonnet
#
# License: MIT

import utility

import behave

import csv
import io


@behave.when('I run "{command}"')
def step_run(context, command):
    """
    Runs the command-line tool and keeps its outcome.

    :param context: the ``Context`` instance
    :param command: arguments passed to the tool
    """
    context.status, output, context.errors = utility.run_cli(command)
    context.outputs.append(output)


@behave.then('the exit status is {status:d}')
def step_exit_status(context, status):
    """
    Asserts the exit status of the last run.

    :param context: the ``Context`` instance
    :param status: expected status
    """
    assert context.status == status, 'status %r, stderr: %s' % (context.status, context.errors)


@behave.then('the outputs are identical')
def step_outputs_identical(context):
    """
    Asserts every run wrote the same bytes.

    :param context: the ``Context`` instance
    """
    assert len(context.outputs) > 1
    assert all(output == context.outputs[0] for output in context.outputs)


@behave.then('the output starts with "{header}"')
def step_output_header(context, header):
    """
    Asserts the first line of the last output.

    :param context: the ``Context`` instance
    :param header: expected first line
    """
    assert context.outputs[-1].splitlines()[0] == header


@behave.then('the output has {count:d} rows')
def step_output_rows(context, count):
    """
    Asserts the number of CSV rows below the header.

    :param context: the ``Context`` instance
    :param count: expected row count
    """
    rows = list(csv.DictReader(io.StringIO(context.outputs[-1])))
    assert len(rows) == count, '%d rows' % len(rows)


@behave.then('the output contains "{text}"')
def step_output_contains(context, text):
    """
    Asserts the last output contains ``text``.

    :param context: the ``Context`` instance
    :param text: expected text
    """
    assert text in context.outputs[-1], context.outputs[-1]


@behave.then('the error contains "{text}"')
def step_error_contains(context, text):
    """
    Asserts standard error contains ``text``.

    :param context: the ``Context`` instance
    :param text: expected text
    """
    assert text in context.errors, context.errors
