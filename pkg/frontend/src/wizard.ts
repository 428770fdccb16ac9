import { ApiError, CdsClient } from './api';
import { partialScore } from './score';
import type { Catalog, Heuristic, ScoreSummary, SheetDocument } from './types';

const WORD_LIMIT = 5;

export interface WizardHandle {
  el: HTMLElement;
  /** Resolves when every async handler kicked off by UI events has settled. */
  whenIdle(): Promise<void>;
  sheet(): SheetDocument;
  stage(): number;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = '',
  text = '',
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

/**
 * Three-stage critique wizard. Everything rendered comes from the fetched
 * catalog and the sheet document; the panel total is a preview, and the
 * final score is always re-fetched from the service.
 */
export function mountWizard(
  container: HTMLElement,
  client: CdsClient,
  catalog: Catalog,
  initial: SheetDocument,
): WizardHandle {
  let sheet = initial;
  let stage = 1;
  let serviceScore: ScoreSummary | null = null;
  let flaggedNumbers: number[] = [];
  let banner = '';
  let pending: Promise<void> = Promise.resolve();

  const root = el('div', 'wizard');
  container.appendChild(root);

  function track(work: () => Promise<void>): void {
    pending = pending.then(work).catch((err) => {
      banner = err instanceof Error ? err.message : String(err);
      render();
    });
  }

  async function sync(): Promise<void> {
    if (sheet.status === 'finalized') return;
    try {
      sheet = await client.putSheet(sheet);
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        banner = 'This sheet was finalized elsewhere; reloading it.';
        sheet = await client.getSheet(sheet.sheet_id);
        return;
      }
      throw err;
    }
  }

  function setStage(next: number): void {
    stage = next;
    serviceScore = null;
    track(async () => {
      await sync();
      if (stage === 3 && sheet.responses.every((slot) => slot.value !== null)) {
        serviceScore = await client.getScore(sheet.sheet_id);
      }
      render();
    });
    render();
  }

  // -- stage 1: overview ---------------------------------------------------

  function renderOverview(panel: HTMLElement): void {
    const words = new Set(sheet.overview.circled_words);

    const nameLabel = el('label', 'field');
    nameLabel.append('Design name (two or three words)');
    const nameInput = el('input');
    nameInput.id = 'design-name';
    nameInput.value = sheet.overview.design_name;
    nameInput.addEventListener('input', () => {
      sheet.overview.design_name = nameInput.value;
    });
    nameLabel.appendChild(nameInput);

    const essenceLabel = el('label', 'field');
    essenceLabel.append('Essence');
    const essenceInput = el('textarea');
    essenceInput.id = 'essence';
    essenceInput.value = sheet.overview.essence;
    essenceInput.addEventListener('input', () => {
      sheet.overview.essence = essenceInput.value;
    });
    essenceLabel.appendChild(essenceInput);

    const chipsHeading = el(
      'p',
      'chips-heading',
      `Circle ${WORD_LIMIT} first-impression words (${words.size}/${WORD_LIMIT} selected)`,
    );
    const hint = el('p', 'hint');
    hint.id = 'word-hint';
    if (words.size >= WORD_LIMIT) {
      hint.textContent = `Exactly ${WORD_LIMIT} words: deselect one before adding another.`;
    }

    const chips = el('div', 'chips');
    for (const entry of catalog.lexicon) {
      const chip = el('button', 'chip', entry.word);
      chip.type = 'button';
      chip.dataset.word = entry.word;
      const selected = words.has(entry.word);
      if (selected) chip.classList.add('selected');
      // The sixth chip is blocked outright, not just visually.
      chip.disabled = !selected && words.size >= WORD_LIMIT;
      chip.addEventListener('click', () => {
        if (words.has(entry.word)) {
          words.delete(entry.word);
        } else if (words.size < WORD_LIMIT) {
          words.add(entry.word);
        }
        sheet.overview.circled_words = [...words].sort();
        render();
      });
      chips.appendChild(chip);
    }

    panel.append(nameLabel, essenceLabel, chipsHeading, chips, hint);
  }

  // -- stage 2: detail -----------------------------------------------------

  function renderHeuristic(list: HTMLElement, heuristic: Heuristic): void {
    const slot = sheet.responses[heuristic.number - 1];
    const row = el('div', 'heuristic');
    row.dataset.heuristic = String(heuristic.number);
    if (flaggedNumbers.includes(heuristic.number)) row.classList.add('flagged');

    const title = el('p', 'question', `#${heuristic.number} ${heuristic.question}`);
    title.title = heuristic.explanatory_note;

    const scale = el('div', 'scale');
    scale.appendChild(el('span', 'anchor negative', heuristic.negative_anchor));
    const { min, max } = catalog.likert;
    for (let value = min; value <= max; value += 1) {
      const btn = el('button', 'likert', value > 0 ? `+${value}` : String(value));
      btn.type = 'button';
      btn.dataset.value = String(value);
      if (slot.value === value) btn.classList.add('selected');
      btn.addEventListener('click', () => {
        slot.value = slot.value === value ? null : value;
        flaggedNumbers = flaggedNumbers.filter((n) => n !== heuristic.number);
        render();
      });
      scale.appendChild(btn);
    }
    scale.appendChild(el('span', 'anchor positive', heuristic.positive_anchor));

    const note = el('input', 'note');
    note.placeholder = 'Note that justifies the decision';
    note.value = slot.note;
    note.addEventListener('input', () => {
      slot.note = note.value;
    });

    row.append(title, scale, note);
    list.appendChild(row);
  }

  function renderDetail(panel: HTMLElement): void {
    for (const perspective of catalog.perspectives) {
      const section = el('section', 'perspective');
      section.dataset.perspective = perspective.id;
      section.appendChild(el('h3', '', perspective.display_name));
      section.appendChild(el('p', 'description', perspective.description));
      for (const heuristic of catalog.heuristics) {
        if (heuristic.perspective === perspective.id) renderHeuristic(section, heuristic);
      }
      panel.appendChild(section);
    }
  }

  // -- stage 3: review ------------------------------------------------------

  function renderReview(panel: HTMLElement): void {
    const preview = partialScore(sheet, catalog);
    const scoreBox = el('div', 'score-box');
    scoreBox.id = 'stage3-score';

    if (serviceScore) {
      const total = el('p', 'total', `Total: ${serviceScore.total} / ${2 * preview.total}`);
      total.id = 'stage3-total';
      total.dataset.total = String(serviceScore.total);
      scoreBox.appendChild(total);
      scoreBox.appendChild(
        el('p', 'mean', `Mean per heuristic: ${serviceScore.mean.toFixed(2)}`),
      );
      const bars = el('div', 'bars');
      bars.setAttribute('aria-label', 'per-perspective summary');
      for (const perspective of catalog.perspectives) {
        const value = serviceScore.perspective_subtotals[perspective.id];
        const rowEl = el('div', 'bar-row');
        rowEl.appendChild(el('span', 'bar-label', perspective.display_name));
        const track = el('div', 'bar-track');
        const fill = el('div', value >= 0 ? 'bar positive' : 'bar negative');
        fill.style.width = `${Math.abs(value) * 10}%`;
        fill.dataset.subtotal = String(value);
        track.appendChild(fill);
        rowEl.appendChild(track);
        rowEl.appendChild(el('span', 'bar-value', String(value)));
        bars.appendChild(rowEl);
      }
      scoreBox.appendChild(bars);
      scoreBox.appendChild(el('p', 'fineprint', 'Summary bars: subtotals per perspective.'));
    } else if (preview.complete) {
      scoreBox.appendChild(el('p', '', 'Fetching score from the service…'));
    } else {
      const note = el(
        'p',
        'partial',
        `Partial sum ${preview.sum} over ${preview.answered}/${preview.total} answered; ` +
          'finish Stage 2 for the full score.',
      );
      note.id = 'stage3-partial';
      scoreBox.appendChild(note);
    }

    const reflectionsLabel = el('label', 'field');
    reflectionsLabel.append('Reflections');
    const reflections = el('textarea');
    reflections.id = 'reflections';
    reflections.value = sheet.review.reflections;
    reflections.addEventListener('input', () => {
      sheet.review.reflections = reflections.value;
    });
    reflectionsLabel.appendChild(reflections);

    const nextLabel = el('label', 'field');
    nextLabel.append('Improvements and next steps');
    const nextSteps = el('textarea');
    nextSteps.id = 'next-steps';
    nextSteps.value = sheet.review.next_steps;
    nextSteps.addEventListener('input', () => {
      sheet.review.next_steps = nextSteps.value;
    });
    nextLabel.appendChild(nextSteps);

    const finalize = el('button', 'primary', 'Finalize critique');
    finalize.id = 'finalize-btn';
    finalize.type = 'button';
    finalize.addEventListener('click', () => {
      track(async () => {
        await sync();
        try {
          sheet = await client.finalize(sheet.sheet_id);
          serviceScore = await client.getScore(sheet.sheet_id);
          flaggedNumbers = [];
          banner = '';
        } catch (err) {
          if (err instanceof ApiError && err.status === 422) {
            flaggedNumbers = err.unsetNumbers;
            banner = err.message;
            if (flaggedNumbers.length > 0) {
              stage = 2; // jump back to the first unanswered heuristic
            }
          } else {
            throw err;
          }
        }
        render();
        if (flaggedNumbers.length > 0) {
          const target = root.querySelector<HTMLElement>(
            `[data-heuristic="${flaggedNumbers[0]}"]`,
          );
          target?.scrollIntoView?.({ block: 'center' });
        }
      });
    });

    panel.append(scoreBox, reflectionsLabel, nextLabel, finalize);
  }

  function renderFinalized(panel: HTMLElement): void {
    const box = el('div', 'finalized-box');
    box.id = 'finalized-view';
    box.appendChild(el('h3', '', 'Critique finalized'));
    if (serviceScore) {
      const total = el('p', 'total', `Total: ${serviceScore.total}`);
      total.id = 'final-total';
      total.dataset.total = String(serviceScore.total);
      box.appendChild(total);
    }
    box.appendChild(
      el('p', '', `Sheet ${sheet.sheet_id} of artefact ${sheet.artefact_key} is read-only now.`),
    );
    panel.appendChild(box);
  }

  // -- frame ------------------------------------------------------------------

  function renderLivePanel(aside: HTMLElement): void {
    const preview = partialScore(sheet, catalog);
    aside.id = 'live-panel';
    const label = preview.complete ? 'complete' : 'partial';
    const headline = el(
      'p',
      'live-sum',
      `${label} ${preview.sum} (${preview.answered}/${preview.total})`,
    );
    headline.dataset.sum = String(preview.sum);
    headline.dataset.answered = String(preview.answered);
    aside.appendChild(headline);
    for (const perspective of catalog.perspectives) {
      const row = el(
        'p',
        'live-row',
        `${perspective.display_name}: ${preview.perSpective[perspective.id]}`,
      );
      row.dataset.perspective = perspective.id;
      aside.appendChild(row);
    }
  }

  function render(): void {
    root.innerHTML = '';

    const header = el('header');
    header.appendChild(
      el('h2', '', `${sheet.artefact_key} — ${sheet.appraiser} (catalog ${catalog.version_tag})`),
    );
    const nav = el('nav', 'stages');
    for (const [n, titleText] of [
      [1, 'Overview'],
      [2, 'Detail'],
      [3, 'Review'],
    ] as const) {
      const btn = el('button', n === stage ? 'stage active' : 'stage', `${n}. ${titleText}`);
      btn.type = 'button';
      btn.dataset.stage = String(n);
      btn.disabled = sheet.status === 'finalized';
      btn.addEventListener('click', () => setStage(n));
      nav.appendChild(btn);
    }
    header.appendChild(nav);
    root.appendChild(header);

    if (banner) {
      const note = el('p', 'banner', banner);
      note.id = 'banner';
      root.appendChild(note);
    }

    const body = el('div', 'body');
    const panel = el('main', 'stage-panel');
    if (sheet.status === 'finalized') {
      renderFinalized(panel);
    } else if (stage === 1) {
      renderOverview(panel);
    } else if (stage === 2) {
      renderDetail(panel);
    } else {
      renderReview(panel);
    }
    const aside = el('aside', 'live');
    renderLivePanel(aside);
    body.append(panel, aside);
    root.appendChild(body);
  }

  render();
  if (sheet.status === 'finalized') {
    track(async () => {
      serviceScore = await client.getScore(sheet.sheet_id);
      render();
    });
  }

  return {
    el: root,
    whenIdle: async () => {
      // Drain the chain even when handlers queue follow-up work.
      let settled = pending;
      for (;;) {
        await settled;
        if (settled === pending) return;
        settled = pending;
      }
    },
    sheet: () => sheet,
    stage: () => stage,
  };
}
