import { CdsClient } from './api';
import type { Catalog, CritiqueDiff, HistoryEntry } from './types';

export interface HistoryHandle {
  el: HTMLElement;
  whenIdle(): Promise<void>;
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
 * Score timeline for one artefact. Selecting two critiques renders the
 * service-computed diff: six perspective rows, word changes, total delta.
 */
export function mountHistory(
  container: HTMLElement,
  client: CdsClient,
  catalog: Catalog,
  onOpenSheet?: (sheetId: string) => void,
): HistoryHandle {
  let entries: HistoryEntry[] = [];
  let selected: string[] = [];
  let diffDoc: CritiqueDiff | null = null;
  let searched = '';
  let pending: Promise<void> = Promise.resolve();

  const root = el('div', 'history');
  container.appendChild(root);

  function track(work: () => Promise<void>): void {
    pending = pending.then(work).catch(() => render());
  }

  function toggle(sheetId: string): void {
    if (selected.includes(sheetId)) {
      selected = selected.filter((s) => s !== sheetId);
    } else {
      selected = [...selected, sheetId].slice(-2);
    }
    diffDoc = null;
    if (selected.length === 2) {
      const [earlier, later] = selected;
      track(async () => {
        diffDoc = await client.diff(earlier, later);
        render();
      });
    }
    render();
  }

  function renderDiff(panel: HTMLElement): void {
    if (!diffDoc) return;
    const box = el('div', 'diff-box');
    box.id = 'diff-view';
    box.appendChild(
      el('h3', '', `Change: ${diffDoc.total_delta >= 0 ? '+' : ''}${diffDoc.total_delta}`),
    );
    const table = el('table', 'diff-table');
    const head = el('tr');
    head.append(el('th', '', 'Perspective'), el('th', '', 'Delta'));
    table.appendChild(head);
    for (const perspective of catalog.perspectives) {
      const row = el('tr', 'diff-row');
      row.dataset.perspective = perspective.id;
      const value = diffDoc.per_perspective_delta[perspective.id];
      row.append(
        el('td', '', perspective.display_name),
        el('td', 'delta', value >= 0 ? `+${value}` : String(value)),
      );
      table.appendChild(row);
    }
    box.appendChild(table);
    box.appendChild(
      el('p', '', `Words added: ${diffDoc.words_added.join(', ') || '(none)'}`),
    );
    box.appendChild(
      el('p', '', `Words removed: ${diffDoc.words_removed.join(', ') || '(none)'}`),
    );
    panel.appendChild(box);
  }

  function render(): void {
    root.innerHTML = '';

    const form = el('form', 'history-form');
    const input = el('input');
    input.id = 'history-key';
    input.placeholder = 'artefact key';
    input.value = searched;
    const go = el('button', 'primary', 'Show history');
    go.type = 'submit';
    form.append(input, go);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      searched = input.value.trim();
      selected = [];
      diffDoc = null;
      track(async () => {
        entries = await client.history(searched);
        render();
      });
    });
    root.appendChild(form);

    if (searched && entries.length === 0) {
      root.appendChild(
        el('p', 'empty-state', `No critiques recorded for “${searched}” yet.`),
      );
      return;
    }
    if (entries.length > 0) {
      const list = el('ol', 'timeline');
      for (const entry of entries) {
        const item = el('li', 'timeline-entry');
        item.dataset.sheet = entry.sheet_id;
        const pick = el('input');
        pick.type = 'checkbox';
        pick.checked = selected.includes(entry.sheet_id);
        pick.addEventListener('click', () => toggle(entry.sheet_id));
        const total = entry.score ? `total ${entry.score.total}` : 'no score yet';
        const summary = el(
          'span',
          '',
          ` ${entry.created_at} — ${entry.status} — ${total} — by ${entry.appraiser} `,
        );
        item.append(pick, summary);
        if (entry.status === 'draft' && onOpenSheet) {
          const open = el('button', 'linkish', 'resume');
          open.type = 'button';
          open.addEventListener('click', () => onOpenSheet(entry.sheet_id));
          item.appendChild(open);
        }
        list.appendChild(item);
      }
      root.appendChild(list);
      root.appendChild(
        el('p', 'hint', 'Select two critiques to compare them.'),
      );
      renderDiff(root);
    }
  }

  render();
  return {
    el: root,
    whenIdle: async () => {
      let settled = pending;
      for (;;) {
        await settled;
        if (settled === pending) return;
        settled = pending;
      }
    },
  };
}
