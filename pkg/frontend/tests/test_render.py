import pytest
from PIL import Image

from posnerplots import (
    EmptySeriesError,
    MissingColumnError,
    PlotSpec,
    build_figure,
    render,
)

TS_TEXT = "t_s,a,b\n0.0,1.0,2.0\n1.0,0.5,1.5\n2.0,0.25,1.25\n"
SPECTRUM_TEXT = (
    "site,site_label,omega_rad_s,frobenius_norm\n"
    "0,P0,0.0,1.25\n0,P0,5.0,0.5\n0,P0,700.0,0.125\n"
)


def ts_csv(tmp_path, name="series.csv", text=TS_TEXT):
    path = tmp_path / name
    path.write_text(text)
    return path


def legend_texts(fig):
    legend = fig.axes[0].get_legend()
    return [t.get_text() for t in legend.get_texts()]


def test_timeseries_renders_png(tmp_path):
    spec = PlotSpec(
        kind="timeseries",
        csv_paths=(str(ts_csv(tmp_path)),),
        out_path=str(tmp_path / "fig.png"),
    )
    out = render(spec)
    assert out.exists() and out.stat().st_size > 0


def test_timeseries_legend_is_column_names(tmp_path):
    spec = PlotSpec(
        kind="timeseries",
        csv_paths=(str(ts_csv(tmp_path)),),
        out_path=str(tmp_path / "fig.png"),
    )
    fig = build_figure(spec)
    assert legend_texts(fig) == ["a", "b"]
    assert len(fig.axes[0].get_lines()) == 2


def test_timeseries_column_subset(tmp_path):
    spec = PlotSpec(
        kind="timeseries",
        csv_paths=(str(ts_csv(tmp_path)),),
        out_path=str(tmp_path / "fig.png"),
        columns=("b",),
    )
    assert legend_texts(build_figure(spec)) == ["b"]


def test_missing_column_named_and_nothing_written(tmp_path):
    out = tmp_path / "fig.png"
    spec = PlotSpec(
        kind="timeseries",
        csv_paths=(str(ts_csv(tmp_path)),),
        out_path=str(out),
        columns=("concurrence_P9_P9",),
    )
    with pytest.raises(MissingColumnError) as info:
        render(spec)
    assert "'concurrence_P9_P9'" in str(info.value)
    assert "series.csv" in str(info.value)
    assert "available" in str(info.value)
    assert not out.exists()


def test_missing_time_column(tmp_path):
    path = ts_csv(tmp_path, text="x,y\n0,1\n1,2\n")
    spec = PlotSpec(kind="timeseries", csv_paths=(str(path),), out_path="fig.png")
    with pytest.raises(MissingColumnError, match="'t_s'"):
        build_figure(spec)


def test_empty_csv_errors_and_no_file(tmp_path):
    out = tmp_path / "fig.png"
    empty = ts_csv(tmp_path, name="empty.csv", text="")
    spec = PlotSpec(kind="timeseries", csv_paths=(str(empty),), out_path=str(out))
    with pytest.raises(EmptySeriesError):
        render(spec)
    header_only = ts_csv(tmp_path, name="header.csv", text="t_s,a\n")
    spec = PlotSpec(kind="timeseries", csv_paths=(str(header_only),), out_path=str(out))
    with pytest.raises(EmptySeriesError, match="no data rows"):
        render(spec)
    assert not out.exists()


def test_overlay_draws_one_curve_per_file(tmp_path):
    paths = [str(ts_csv(tmp_path, name=f"case_{i}.csv")) for i in range(3)]
    spec = PlotSpec(
        kind="overlay",
        csv_paths=tuple(paths),
        out_path=str(tmp_path / "overlay.png"),
        columns=("a",),
    )
    fig = build_figure(spec)
    assert legend_texts(fig) == ["case_0: a", "case_1: a", "case_2: a"]
    assert render(spec).exists()


def test_overlay_reports_which_file_lacks_the_column(tmp_path):
    good = ts_csv(tmp_path, name="good.csv")
    bad = ts_csv(tmp_path, name="bad.csv", text="t_s,z\n0,1\n1,2\n")
    spec = PlotSpec(
        kind="overlay",
        csv_paths=(str(good), str(bad)),
        out_path=str(tmp_path / "overlay.png"),
        columns=("a",),
    )
    with pytest.raises(MissingColumnError, match="bad.csv"):
        build_figure(spec)


def test_spectrum_stem_log_axis_positive_frequencies(tmp_path):
    path = ts_csv(tmp_path, name="spectrum.csv", text=SPECTRUM_TEXT)
    spec = PlotSpec(
        kind="spectrum", csv_paths=(str(path),), out_path=str(tmp_path / "s.png")
    )
    fig = build_figure(spec)
    ax = fig.axes[0]
    assert ax.get_xscale() == "log"
    [container] = ax.containers
    # The zero-frequency row cannot sit on a log axis, so two stems remain.
    assert len(container.markerline.get_xdata()) == 2
    assert render(spec).exists()


def test_spectrum_with_no_positive_frequency(tmp_path):
    path = ts_csv(
        tmp_path,
        name="flat.csv",
        text="site,site_label,omega_rad_s,frobenius_norm\n0,P0,0.0,1.0\n",
    )
    spec = PlotSpec(kind="spectrum", csv_paths=(str(path),), out_path="s.png")
    with pytest.raises(EmptySeriesError, match="omega_rad_s"):
        build_figure(spec)


def test_vector_formats(tmp_path):
    for suffix in (".svg", ".pdf"):
        spec = PlotSpec(
            kind="timeseries",
            csv_paths=(str(ts_csv(tmp_path)),),
            out_path=str(tmp_path / f"fig{suffix}"),
        )
        out = render(spec)
        assert out.suffix == suffix and out.stat().st_size > 0


def test_dpi_sets_pixel_size(tmp_path):
    spec = PlotSpec(
        kind="timeseries",
        csv_paths=(str(ts_csv(tmp_path)),),
        out_path=str(tmp_path / "small.png"),
        dpi=50,
    )
    with Image.open(render(spec)) as image:
        assert image.size == (400, 225)


def test_render_does_not_modify_inputs(tmp_path):
    path = ts_csv(tmp_path)
    before = path.read_bytes()
    render(
        PlotSpec(
            kind="timeseries",
            csv_paths=(str(path),),
            out_path=str(tmp_path / "fig.png"),
        )
    )
    assert path.read_bytes() == before


def test_render_creates_parent_directory(tmp_path):
    spec = PlotSpec(
        kind="timeseries",
        csv_paths=(str(ts_csv(tmp_path)),),
        out_path=str(tmp_path / "nested" / "deep" / "fig.png"),
    )
    assert render(spec).exists()


def choose_kind(header: str):
    names = header.split(",")
    if names[0] == "t_s":
        return "timeseries", ()
    if "omega_rad_s" in names:
        return "spectrum", ()
    return "spectrum", ("rate_per_s", "lifetime_s")


def test_every_preset_csv_renders(engine_outdir, tmp_path):
    csvs = sorted(engine_outdir.glob("*.csv"))
    assert len(csvs) >= 12
    for path in csvs:
        header = path.read_text().split("\n", 1)[0]
        kind, columns = choose_kind(header)
        out = render(
            PlotSpec(
                kind=kind,
                csv_paths=(str(path),),
                out_path=str(tmp_path / f"{path.stem}.png"),
                columns=columns,
            )
        )
        assert out.exists() and out.stat().st_size > 0


def test_doping_overlay_has_three_curves(engine_outdir, tmp_path):
    paths = [
        str(engine_outdir / f"fig7_doping__{variant}.csv")
        for variant in ("pure", "li6", "li7")
    ]
    spec = PlotSpec(
        kind="overlay",
        csv_paths=tuple(paths),
        out_path=str(tmp_path / "doping.png"),
        columns=("concurrence_P0_P0",),
    )
    fig = build_figure(spec)
    labels = legend_texts(fig)
    assert len(labels) == 3
    assert {l.split(":")[0] for l in labels} == {
        "fig7_doping__pure",
        "fig7_doping__li6",
        "fig7_doping__li7",
    }
    assert render(spec).exists()


def test_engine_csv_missing_column_error(engine_outdir, tmp_path):
    [path] = engine_outdir.glob("fig5_transfer.csv")
    spec = PlotSpec(
        kind="timeseries",
        csv_paths=(str(path),),
        out_path=str(tmp_path / "fig.png"),
        columns=("coherence_P0_P0",),
    )
    with pytest.raises(MissingColumnError, match="'coherence_P0_P0'"):
        build_figure(spec)
