"""
Pipeline orchestration: input → preprocess → select → fit → decompose → report.

Each stage runs inside a :class:`~utils.logger.LogContext`; a failure is
wrapped in :class:`~utils.exceptions.PipelineStageError` carrying the stage's
exit code, the manifest records the failed stage, and everything written
before the failure stays on disk.
"""

from __future__ import annotations

from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from em.runner import common_components, run_em
from em.steps import run_e_step
from em.types import EMState
from kalman.riccati import burn_in_index, riccati_steady_state
from kalman.smoother import mse_traces
from modelselect.report import SelectionOverrides, select_model
from modelselect.types import SelectionReport
from pipeline.config import RunConfig
from pipeline.diagnostics import residual_seasonality, tie_discrepancies
from pipeline.emitters import OutputWriter
from pipeline.manifest import RunManifest
from pipeline.simulation import DEFAULT_START, SimulatedPanel, write_simulation
from preprocess.panel import PreprocessedPanel, preprocess_panel
from preprocess.types import PanelData
from repositories.base import ArtifactRepository, FittedModel, PanelRepository
from repositories.factory import RepositoryFactory
from simulate.dgp import DGPConfig
from trendcycle.decomposition import decompose_factors, decompose_panel
from trendcycle.spectral import spectral_report
from trendcycle.types import SpectralReport, TCDecomposition, VariableComponents
from utils.constants import ExitCode
from utils.exceptions import ConvergenceError, InvalidSpecError, PipelineStageError, SelectionError
from utils.logger import LogContext
from utils.logging_interfaces import LoggerProtocol
from utils.model import FactorEstimates, ModelSpec

STAGE_EXIT_CODES: dict[str, ExitCode] = {
    "input": ExitCode.INPUT,
    "preprocess": ExitCode.PREPROCESS,
    "select": ExitCode.SELECT,
    "fit": ExitCode.FIT,
    "decompose": ExitCode.DECOMPOSE,
    "report": ExitCode.REPORT,
    "simulate": ExitCode.SIMULATE,
}

SELECTION_FILES = ("selection.json", "explained_variance.csv", "rho.csv")


@dataclass
class Decomposition:
    tc: TCDecomposition
    components: list[VariableComponents]
    spectra: SpectralReport
    chi: np.ndarray
    xi: np.ndarray


@dataclass
class PipelineResult:
    """
    Outcome of one command.

    :ivar exit_code: 0 on success, the failing stage's code otherwise
    :ivar error: The stage failure, when there was one
    """

    command: str
    output_dir: Path
    manifest: RunManifest
    exit_code: int = int(ExitCode.OK)
    error: PipelineStageError | None = None
    panel: PanelData | None = None
    preprocessed: PreprocessedPanel | None = None
    selection: SelectionReport | None = None
    em_state: EMState | None = None
    estimates: FactorEstimates | None = None
    model: FittedModel | None = None
    decomposition: Decomposition | None = None
    simulation: SimulatedPanel | None = None
    outputs: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.exit_code == ExitCode.OK


class Pipeline:
    """
    Runs the subcommands against injected repositories.

    :ivar config: Run settings
    :ivar output_dir: Resolved output directory (``OUTPUT_DIR`` wins over the config)
    """

    def __init__(
        self,
        config: RunConfig,
        *,
        panel_repository: PanelRepository | None = None,
        artifact_repository: ArtifactRepository | None = None,
        logger: LoggerProtocol | None = None,
    ):
        if logger is None:
            from utils.logger import log as logger
        self.config = config
        self.output_dir = config.resolved_output_dir
        self._logger = logger
        self._panels = panel_repository or RepositoryFactory.create_panel_repository(logger=logger)
        self._artifacts = artifact_repository or RepositoryFactory.create_artifact_repository(
            self.output_dir, logger=logger
        )

    # -- plumbing ---------------------------------------------------------

    def _new_result(self, command: str) -> PipelineResult:
        manifest = RunManifest(
            command=command, seed=self.config.seed, settings=self.config.summary()
        )
        return PipelineResult(command=command, output_dir=self.output_dir, manifest=manifest)

    @contextmanager
    def _stage(self, result: PipelineResult, name: str) -> Iterator[None]:
        code = int(STAGE_EXIT_CODES[name])
        try:
            with LogContext(name.capitalize()):
                yield
        except Exception as e:
            result.manifest.record(name, "failed", code, str(e))
            raise PipelineStageError(name, code, e) from e
        result.manifest.record(name, "ok")

    def _finish(self, result: PipelineResult, writer: OutputWriter | None) -> PipelineResult:
        if writer is not None:
            result.outputs = list(writer.written)
        result.manifest.outputs = sorted(result.outputs)
        result.manifest.exit_code = result.exit_code
        path = result.manifest.write(self.output_dir)
        self._logger.debug(f"manifest written to {path}")
        return result

    def _fail(self, result: PipelineResult, error: PipelineStageError) -> None:
        result.exit_code = error.exit_code
        result.error = error
        self._logger.error(error.message)

    # -- stages -----------------------------------------------------------

    def _read_input(self, result: PipelineResult) -> dict[str, list[int]]:
        with self._stage(result, "input"):
            if self.config.panel is None:
                raise InvalidSpecError("no input panel configured", field="panel")
            result.panel = self._panels.read_panel(self.config.panel, self.config.metadata)
            return self.config.tie_groups(result.panel.metas)

    def _preprocess(self, result: PipelineResult) -> PreprocessedPanel:
        assert result.panel is not None
        with self._stage(result, "preprocess"):
            result.preprocessed = preprocess_panel(
                result.panel,
                threshold=self.config.detrend_threshold,
                long_run=self.config.long_run,
                demean=self.config.demean,
                logger=self._logger,
            )
        return result.preprocessed

    def _select(
        self, result: PipelineResult, pre: PreprocessedPanel, writer: OutputWriter, *, emit: bool
    ) -> SelectionReport:
        cfg = self.config
        with self._stage(result, "select"):
            report = select_model(
                pre.X,
                ids=pre.ids,
                rho_modes=[meta.rho_mode for meta in pre.panel.metas],
                q_max=cfg.q_max,
                r_max=cfg.r_max,
                trend_kmax=cfg.trend_kmax,
                tol_share=cfg.tol_share,
                adf_level=cfg.adf_level,
                bandwidth=cfg.bandwidth,
                overrides=SelectionOverrides(q=cfg.q, r=cfg.r, d=cfg.d),
                logger=self._logger,
            )
            result.selection = report
            result.manifest.selection = {
                "q_hat": report.q_hat,
                "trend_count_hat": report.trend_count_hat,
                "r_hat": report.r_hat,
                "d_hat": report.d_hat,
                "i1_idiosyncratic": int(report.rho.sum()),
                "admissible": report.is_admissible,
            }
            result.manifest.warnings.extend(report.warnings)
            if emit:
                writer.selection_report(report)
        return report

    def _fit(
        self,
        result: PipelineResult,
        pre: PreprocessedPanel,
        report: SelectionReport,
        groups: dict[str, list[int]],
    ) -> FittedModel:
        cfg = self.config
        with self._stage(result, "fit"):
            if not report.is_admissible:
                raise SelectionError(
                    f"cannot fit q={report.q_hat} r={report.r_hat} d={report.d_hat}: "
                    "need 0 < d < q <= r",
                    field="q",
                )
            spec = ModelSpec(
                n=pre.n,
                T=pre.T,
                r=report.r_hat,
                q=report.q_hat,
                d=report.d_hat,
                diffuse_scale=cfg.diffuse_scale,
                em_tol=cfg.em_tol,
                em_max_iter=cfg.em_max_iter,
                em_min_iter=cfg.em_min_iter,
                i1_floor_frac=cfg.i1_floor_frac,
                loglik_slack=cfg.loglik_slack,
            )
            state, estimates = run_em(
                pre.X,
                spec,
                groups or None,
                rho=report.rho,
                variant=cfg.smoother.value,
                logger=self._logger,
            )
            result.em_state, result.estimates = state, estimates
            result.manifest.estimation = {
                "loglik": float(state.loglik),
                "iterations": state.k,
                "converged": state.converged,
                "delta_loglik": float(state.delta_l),
            }
            result.manifest.warnings.extend(state.warnings)
            model = FittedModel(
                ids=pre.ids,
                dates=pre.dates,
                spec=spec,
                params=state.params,
                X=pre.X,
                Y=pre.Y,
                detrend=pre.detrend,
                factors=estimates.factors,
                loglik=float(state.loglik),
                ties={name: [pre.ids[i] for i in rows] for name, rows in groups.items()},
            )
            self._artifacts.save(model)
            result.model = model
        return model

    def _load_model(self, result: PipelineResult, model_dir: Path | str) -> FittedModel:
        with self._stage(result, "input"):
            source = RepositoryFactory.create_artifact_repository(model_dir, logger=self._logger)
            result.model = source.load()
        return result.model

    def _decompose(self, result: PipelineResult, model: FittedModel) -> Decomposition:
        q = self.config.q if self.config.q is not None else model.spec.q
        d = self.config.d if self.config.d is not None else model.spec.d
        with self._stage(result, "decompose"):
            if d is None:
                raise InvalidSpecError("the cointegration deficit d is not known", field="d")
            tc = decompose_factors(model.factors, q, d, logger=self._logger)
            chi = common_components(model.params.Lambda, model.factors)
            xi = model.X - chi
            components = decompose_panel(model.ids, model.params.Lambda, tc, model.detrend, xi)
            spectra = spectral_report(tc)
            result.manifest.warnings.extend(tc.warnings)
            result.decomposition = Decomposition(tc, components, spectra, chi, xi)
        return result.decomposition

    def _report(
        self,
        result: PipelineResult,
        model: FittedModel,
        dec: Decomposition,
        writer: OutputWriter,
        *,
        include: tuple[str, ...],
        selection_source: Path | None = None,
    ) -> None:
        emit = self.config.emit
        wanted = [name for name in include if getattr(emit, name)]
        with self._stage(result, "report"):
            if "factors" in wanted:
                writer.factors(model.dates, model.factors)
            if "trends" in wanted:
                writer.trends(model.dates, dec.tc)
            if "cycles" in wanted:
                writer.cycles(model.dates, dec.tc)
            if "per_variable" in wanted:
                writer.per_variable(model.dates, dec.components, model.Y)
            if "spectra" in wanted:
                writer.spectra(dec.spectra)
            if "mse_trace" in wanted:
                self._emit_mse_trace(result, model, writer)
            groups = {
                name: [model.ids.index(member) for member in members]
                for name, members in model.ties.items()
            }
            if "seasonality" in wanted and groups:
                common = model.Y - dec.xi
                writer.seasonality(
                    residual_seasonality(model.ids, model.Y, common, model.dates, groups)
                )
            if "tie_diagnostics" in wanted and groups:
                writer.tie_diagnostics(tie_discrepancies(model.ids, model.X, dec.chi, groups))
            if "selection_report" in wanted and selection_source is not None:
                self._copy_selection(selection_source, writer)

    def _emit_mse_trace(
        self, result: PipelineResult, model: FittedModel, writer: OutputWriter
    ) -> None:
        out = run_e_step(
            model.params,
            model.X,
            model.spec,
            variant=self.config.smoother.value,
            logger=self._logger,
        )
        writer.mse_trace(model.dates, mse_traces(out.filtered, out.smoothed, model.params.r))
        try:
            steady = riccati_steady_state(
                out.ss, P0=out.filtered.init.cov, diffuse_scale=model.spec.diffuse_scale
            )
        except ConvergenceError as e:
            result.manifest.warnings.append(str(e))
            self._logger.warning(f"steady state not reached: {e}")
            return
        burn_in = burn_in_index(out.filtered.P_pred, steady.P_pred)
        result.manifest.estimation.update(
            {
                "burn_in": burn_in,
                "riccati_iterations": steady.iterations,
                "steady_state_trace": float(steady.trace_path[-1]),
            }
        )

    def _copy_selection(self, source: Path, writer: OutputWriter) -> None:
        for name in SELECTION_FILES:
            if (source / name).is_file():
                writer.copy(source / name, name)

    # -- commands ---------------------------------------------------------

    def fit(self) -> PipelineResult:
        """Preprocess, select, estimate, decompose and write every enabled output."""
        result = self._new_result("fit")
        writer = OutputWriter(self.output_dir, logger=self._logger)
        try:
            groups = self._read_input(result)
            pre = self._preprocess(result)
            report = self._select(
                result, pre, writer, emit=self.config.emit.selection_report
            )
            model = self._fit(result, pre, report, groups)
            result.outputs.append("model/")
            dec = self._decompose(result, model)
            self._report(
                result,
                model,
                dec,
                writer,
                include=(
                    "factors",
                    "trends",
                    "cycles",
                    "per_variable",
                    "mse_trace",
                    "spectra",
                    "seasonality",
                    "tie_diagnostics",
                ),
            )
        except PipelineStageError as e:
            self._fail(result, e)
        result.outputs = list(writer.written) + result.outputs
        return self._finish(result, None)

    def select(self) -> PipelineResult:
        """Preprocess and run the selection criteria; writes the selection report."""
        result = self._new_result("select")
        writer = OutputWriter(self.output_dir, logger=self._logger)
        try:
            self._read_input(result)
            pre = self._preprocess(result)
            self._select(result, pre, writer, emit=True)
        except PipelineStageError as e:
            self._fail(result, e)
        return self._finish(result, writer)

    def decompose(self, model_dir: Path | str) -> PipelineResult:
        """
        Trend-cycle decomposition of a stored fit; ``q`` and ``d`` may be overridden.

        :param model_dir: Run directory holding the ``model/`` artifact
        """
        result = self._new_result("decompose")
        writer = OutputWriter(self.output_dir, logger=self._logger)
        try:
            model = self._load_model(result, model_dir)
            dec = self._decompose(result, model)
            self._report(
                result,
                model,
                dec,
                writer,
                include=("factors", "trends", "cycles", "per_variable", "spectra"),
            )
        except PipelineStageError as e:
            self._fail(result, e)
        return self._finish(result, writer)

    def report(self, model_dir: Path | str) -> PipelineResult:
        """
        Write every enabled output of a stored fit and nothing else.

        :param model_dir: Run directory holding the ``model/`` artifact
        """
        result = self._new_result("report")
        writer = OutputWriter(self.output_dir, logger=self._logger)
        try:
            model = self._load_model(result, model_dir)
            dec = self._decompose(result, model)
            self._report(
                result,
                model,
                dec,
                writer,
                include=(
                    "factors",
                    "trends",
                    "cycles",
                    "per_variable",
                    "mse_trace",
                    "spectra",
                    "seasonality",
                    "tie_diagnostics",
                    "selection_report",
                ),
                selection_source=Path(model_dir),
            )
        except PipelineStageError as e:
            self._fail(result, e)
        return self._finish(result, writer)

    def simulate(self, dgp: DGPConfig, *, start: str = DEFAULT_START) -> PipelineResult:
        """
        Write a synthetic panel with its ground truth.

        :param dgp: Data-generating process
        :param start: First quarter of the sample
        """
        result = self._new_result("simulate")
        try:
            with self._stage(result, "simulate"):
                result.simulation = write_simulation(
                    dgp, self.output_dir, self._panels, start=start, logger=self._logger
                )
                result.outputs = list(result.simulation.files)
                result.manifest.settings.update(
                    {f"dgp.{k}": str(v) for k, v in asdict(dgp).items()}
                )
                result.manifest.seed = dgp.seed
        except PipelineStageError as e:
            self._fail(result, e)
        return self._finish(result, None)


def run_pipeline(config: RunConfig, **kwargs) -> PipelineResult:
    """Run the full ``fit`` command; keyword arguments go to :class:`Pipeline`."""
    return Pipeline(config, **kwargs).fit()
