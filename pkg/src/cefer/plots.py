"""Figure rendering for experiment reports."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_accuracy_figure(table, path):
    """Grouped bar chart of accuracy and macro-F1 per grid row."""
    labels = [f"{r.spec.describe()}" + ("+emo" if r.use_emosyn else "") for r in table.rows]
    acc = [r.accuracy for r in table.rows]
    f1 = [r.macro_f1 for r in table.rows]
    x = np.arange(len(labels))
    width = 0.38

    fig, ax = plt.subplots(figsize=(max(6, 0.7 * len(labels) + 2), 4.5))
    ax.bar(x - width / 2, acc, width, label="accuracy")
    ax.bar(x + width / 2, f1, width, label="macro-F1")
    ax.set_xticks(x)
    ax.set_xticklabels(labels, rotation=45, ha="right", fontsize=8)
    ax.set_ylim(0, 1.0)
    ax.set_ylabel("score")
    ax.set_title(f"pooling grid on {table.dataset_name} (seed {table.seed})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_confusion_figure(confusion, class_names, path):
    """Heatmap of a confusion matrix."""
    confusion = np.asarray(confusion)
    fig, ax = plt.subplots(figsize=(5, 4.5))
    im = ax.imshow(confusion, cmap="Blues")
    ax.set_xticks(range(len(class_names)))
    ax.set_yticks(range(len(class_names)))
    ax.set_xticklabels(class_names, rotation=45, ha="right", fontsize=8)
    ax.set_yticklabels(class_names, fontsize=8)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    for i in range(confusion.shape[0]):
        for j in range(confusion.shape[1]):
            ax.text(j, i, str(confusion[i, j]), ha="center", va="center", fontsize=7)
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
