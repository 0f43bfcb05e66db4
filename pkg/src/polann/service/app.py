"""FastAPI application over the core annotation functions.

Each endpoint is a thin adapter: decode the request into core types, call
the pure function, shape the result.  Domain failures surface as HTTP 422
with the error message; malformed request bodies are handled by FastAPI's
own validation layer.
"""

from __future__ import annotations

from collections import defaultdict

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import evaluation, formats
from ..corpus import Corpus, Lexicon, Sentence, Token, split_ids
from ..errors import PolannError, ValidationError
from ..polarity import (
    LABELS,
    CentroidSet,
    PolarityCoordinate,
    SentimentLabel,
    annotate_pc,
    classify_pc,
    confidence,
    label_distribution,
)
from . import schemas


def _centroid_set(raw: dict[str, tuple[float, float]] | None) -> CentroidSet:
    if raw is None:
        return CentroidSet.default()
    coordinates = {
        SentimentLabel.parse(name): PolarityCoordinate(polarity=pair[0], intensity=pair[1])
        for name, pair in raw.items()
    }
    return CentroidSet(coordinates=coordinates)


def _lexicon(raw: dict[str, float]) -> Lexicon:
    # case-insensitive keys; entries colliding after lowercasing are averaged
    sums: dict[str, list[float]] = defaultdict(list)
    for lemma, score in raw.items():
        sums[lemma.lower()].append(score)
    return Lexicon(entries={k: sum(v) / len(v) for k, v in sums.items()})


def _rows(items: list[schemas.LabeledId]) -> list[formats.AnnotationRow]:
    return [
        formats.AnnotationRow(sentence_id=item.id, label=SentimentLabel.parse(item.label))
        for item in items
    ]


def create_app() -> FastAPI:
    app = FastAPI(title="polann", description="emotion-polarity annotation service")

    @app.exception_handler(PolannError)
    async def _domain_error(request: Request, exc: PolannError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok")

    @app.post("/annotate/pc", response_model=schemas.AnnotatePcResponse)
    def annotate(request: schemas.AnnotatePcRequest) -> schemas.AnnotatePcResponse:
        sentences = tuple(
            Sentence(
                id=s.id,
                tokens=tuple(Token(form=t.form, lemma=t.lemma) for t in s.tokens),
            )
            for s in request.sentences
        )
        corpus = Corpus(sentences=sentences, source="request")
        annotations = annotate_pc(corpus, _lexicon(request.lexicon), _centroid_set(request.centroids))
        distribution = label_distribution(annotations)
        return schemas.AnnotatePcResponse(
            annotations=[
                schemas.AnnotationOut(
                    sentence_id=a.sentence_id,
                    label=str(a.label),
                    alpha=a.alpha,
                    polarity=a.coordinate.polarity,
                    intensity=a.coordinate.intensity,
                    matched_count=a.matched_count,
                )
                for a in annotations
            ],
            distribution={str(label): count for label, count in distribution.items()},
        )

    @app.post("/classify/pc", response_model=schemas.ClassifyResponse)
    def classify(request: schemas.ClassifyRequest) -> schemas.ClassifyResponse:
        coordinate = PolarityCoordinate(polarity=request.polarity, intensity=request.intensity)
        centroids = _centroid_set(request.centroids)
        label, distances = classify_pc(coordinate, centroids)
        return schemas.ClassifyResponse(
            label=str(label),
            alpha=confidence(distances),
            distances={str(k): v for k, v in distances.items()},
        )

    @app.post("/split", response_model=schemas.SplitResponse)
    def split(request: schemas.SplitRequest) -> schemas.SplitResponse:
        if len(set(request.ids)) != len(request.ids):
            raise ValidationError("ids must be distinct")
        train, validation, test = split_ids(list(request.ids), request.seed)
        return schemas.SplitResponse(train=train, validation=validation, test=test)

    @app.post("/evaluate", response_model=schemas.EvaluateResponse)
    def evaluate(request: schemas.EvaluateRequest) -> schemas.EvaluateResponse:
        ids, gold, predicted = formats.align_rows(_rows(request.gold), _rows(request.predicted))
        matrix = evaluation.confusion(gold, predicted)
        report = evaluation.metrics(matrix, only_present=request.only_present)
        names = [str(label) for label in LABELS]
        grouped = None
        grouped_mean = None
        if request.groups is not None:
            missing = [i for i in ids if i not in request.groups]
            if missing:
                shown = ", ".join(repr(m) for m in missing[:10])
                raise ValidationError(f"no group for ids: {shown}")
            scores, grouped_mean = evaluation.grouped_macro(
                gold, predicted, [request.groups[i] for i in ids]
            )
            grouped = scores
        return schemas.EvaluateResponse(
            confusion=[[int(c) for c in row] for row in matrix.counts],
            precision=dict(zip(names, report.precision)),
            recall=dict(zip(names, report.recall)),
            f1=dict(zip(names, report.f1)),
            support=dict(zip(names, report.support)),
            macro_f1=report.macro_f1,
            micro_f1=report.micro_f1,
            grouped=grouped,
            grouped_mean=grouped_mean,
        )

    @app.post("/agreement", response_model=schemas.AgreementResponse)
    def agreement(request: schemas.AgreementRequest) -> schemas.AgreementResponse:
        _, a_labels, b_labels = formats.align_rows(_rows(request.a), _rows(request.b))
        return schemas.AgreementResponse(kappa=evaluation.cohen_kappa(a_labels, b_labels))

    return app
