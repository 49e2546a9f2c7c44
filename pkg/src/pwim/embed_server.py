"""Optional real-model backend for the /embed protocol.

Loads a SentenceTransformers model and serves it over HTTP so the main
package (and its acceptance run) can stay free of ML runtime imports.
"""

from __future__ import annotations

from fastapi import FastAPI
from pydantic import BaseModel

from sentence_transformers import SentenceTransformer


class EmbedBody(BaseModel):
    model: str
    texts: list[str]


def create_embed_app(model_name: str = "all-mpnet-base-v2") -> FastAPI:
    encoder = SentenceTransformer(model_name)
    dimension = int(encoder.get_sentence_embedding_dimension())
    app = FastAPI(title="pwim-embed", docs_url=None, redoc_url=None)

    @app.post("/embed")
    def embed(body: EmbedBody):
        vectors = encoder.encode(body.texts, normalize_embeddings=True)
        return {
            "model": model_name,
            "dimension": dimension,
            "vectors": [[float(x) for x in vec] for vec in vectors],
        }

    return app


def run_server(host: str = "127.0.0.1", port: int = 8600,
               model_name: str = "all-mpnet-base-v2") -> None:
    import uvicorn

    app = create_embed_app(model_name)
    uvicorn.run(app, host=host, port=port, log_level="warning")
