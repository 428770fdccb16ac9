// History and diff views against the real Python service.
import { afterAll, beforeAll, beforeEach, describe, expect, it } from 'vitest';

import { CdsClient } from '../src/api';
import { mountHistory } from '../src/history';
import type { Catalog, SheetDocument } from '../src/types';
import { startService, type LiveService } from './service';

let service: LiveService;
let client: CdsClient;
let catalog: Catalog;

beforeAll(async () => {
  service = await startService();
  client = new CdsClient(service.baseUrl);
  catalog = await client.getCatalog();
});

afterAll(async () => {
  await service.stop();
});

beforeEach(() => {
  document.body.innerHTML = '';
});

async function finalizedSheet(
  artefact: string,
  value: number,
  words: string[],
): Promise<SheetDocument> {
  const draft = await client.createDraft(artefact, 'erin');
  draft.overview = { design_name: 'Demo', essence: 'gist', circled_words: words };
  for (const slot of draft.responses) slot.value = value;
  draft.review = { reflections: 'ok', next_steps: 'more' };
  await client.putSheet(draft);
  return client.finalize(draft.sheet_id);
}

function q<T extends HTMLElement>(selector: string): T {
  const node = document.querySelector<T>(selector);
  if (!node) throw new Error(`missing element ${selector}`);
  return node;
}

function search(key: string): void {
  const input = q<HTMLInputElement>('#history-key');
  input.value = key;
  q<HTMLFormElement>('.history-form').dispatchEvent(
    new Event('submit', { cancelable: true, bubbles: true }),
  );
}

describe('history view', () => {
  it('shows an empty state for unknown artefacts', async () => {
    const view = mountHistory(document.body, client, catalog);
    search('never-critiqued');
    await view.whenIdle();
    expect(q('.empty-state').textContent).toContain('never-critiqued');
  });

  it('lists critiques chronologically and diffs a selected pair', async () => {
    const first = await finalizedSheet(
      'history-art', 1, ['clear', 'bad', 'vague', 'fair', 'useful'],
    );
    const second = await finalizedSheet(
      'history-art', 2, ['clear', 'clever', 'reliable', 'fair', 'useful'],
    );

    const view = mountHistory(document.body, client, catalog);
    search('history-art');
    await view.whenIdle();

    const entries = document.querySelectorAll<HTMLElement>('.timeline-entry');
    expect(entries).toHaveLength(2);
    expect(entries[0].dataset.sheet).toBe(first.sheet_id);
    expect(entries[1].dataset.sheet).toBe(second.sheet_id);
    expect(entries[0].textContent).toContain('total 30');
    expect(entries[1].textContent).toContain('total 60');

    // Select both: the diff table appears with six perspective rows.
    // Re-query after each click since selection re-renders the list.
    q(`[data-sheet="${first.sheet_id}"]`).querySelector('input')?.click();
    q(`[data-sheet="${second.sheet_id}"]`).querySelector('input')?.click();
    await view.whenIdle();

    const diffView = q('#diff-view');
    expect(diffView.textContent).toContain('Change: +30');
    const rows = diffView.querySelectorAll('.diff-row');
    expect(rows).toHaveLength(6);
    for (const row of rows) {
      expect(row.querySelector('.delta')?.textContent).toBe('+5');
    }
    expect(diffView.textContent).toContain('Words added: clever, reliable');
    expect(diffView.textContent).toContain('Words removed: bad, vague');
  });

  it('carries a null score for drafts', async () => {
    await client.createDraft('draft-art', 'erin');
    const view = mountHistory(document.body, client, catalog);
    search('draft-art');
    await view.whenIdle();
    const entry = q('.timeline-entry');
    expect(entry.textContent).toContain('no score yet');
    expect(entry.textContent).toContain('draft');
  });
});
