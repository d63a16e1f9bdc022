#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest
import matplotlib.pyplot as plt
import pyDistOptCoord as doc


@pytest.mark.parametrize('plot, kwargs', [
    (doc.plotting.plot_states, {'component': 1, 'x_star': [-0.5, 0.5]}),
    (doc.plotting.plot_error, {'epsilon': 10.0}),
    (doc.plotting.plot_obj_gap, {}),
])
def test_plots(short_traj, plot, kwargs):
    fig, ax = plt.subplots()
    assert plot(short_traj, ax=ax, **kwargs) is ax
    assert len(ax.lines) >= 1
    plt.close(fig)
