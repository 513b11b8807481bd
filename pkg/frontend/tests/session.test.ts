import { describe, expect, test } from 'vitest';

import { ApiClient } from '../src/api.js';
import { AssessmentSession, ResponseKindError } from '../src/session.js';
import { FakeService } from './fake_service.js';

function makeSession(fake: FakeService, events = {}) {
  return new AssessmentSession(new ApiClient('http://fake', fake.fetch), events);
}

describe('displayed level mirrors the service', () => {
  test('no level is shown before the first score response', () => {
    const session = makeSession(new FakeService());
    expect(session.displayedLevel()).toBeNull();
    expect(session.hypotheticalLevel()).toBeNull();
  });

  test('create fetches a score and displays exactly that number', async () => {
    const fake = new FakeService();
    fake.script.scoreLevels = [1];
    const session = makeSession(fake);
    await session.create('Test U');
    expect(session.displayedLevel()).toBe(1);
  });

  test('the gauge tracks whatever the service reports, even surprises', async () => {
    // the service is authoritative: if it reports 4 the UI shows 4,
    // with no local recomputation second-guessing it
    const fake = new FakeService();
    fake.script.scoreLevels = [1, 4];
    const seen: number[] = [];
    const session = makeSession(fake, { onScore: (s: { overall_level: number }) => seen.push(s.overall_level) });
    await session.create('Test U');
    await session.refreshScore();
    expect(session.displayedLevel()).toBe(4);
    expect(seen).toEqual([1, 4]);
  });
});

describe('submitting answers', () => {
  test('a valid draft is persisted and the score refreshed', async () => {
    const fake = new FakeService();
    fake.script.scoreLevels = [1, 2];
    const session = makeSession(fake);
    await session.create('Test U');

    session.setDraft('FA1', 'yes');
    expect(session.isDraft('FA1')).toBe(true);
    await session.submitAnswer('FA1');

    expect(session.isDraft('FA1')).toBe(false);
    expect(fake.answers['FA1']?.value).toBe(true);
    expect(session.displayedLevel()).toBe(2);
    expect(session.version).toBe(fake.version);
  });

  test('kind violations never reach the wire', async () => {
    const fake = new FakeService();
    fake.script.scoreLevels = [1];
    const session = makeSession(fake);
    await session.create('Test U');

    session.setDraft('FA1', 'medium');
    await expect(session.submitAnswer('FA1')).rejects.toThrow(ResponseKindError);
    expect(fake.puts).toHaveLength(0);
    expect(session.isDraft('FA1')).toBe(true); // draft survives the failure
  });

  test('a stale version token triggers one reload-and-retry', async () => {
    const fake = new FakeService();
    fake.script.scoreLevels = [1, 2];
    fake.script.conflictsRemaining = 1;
    let conflicts = 0;
    const session = makeSession(fake, { onConflict: () => { conflicts += 1; } });
    await session.create('Test U');

    // another client bumped the version behind our back
    fake.version = 7;
    session.setDraft('FA1', 'yes');
    await session.submitAnswer('FA1');

    expect(conflicts).toBe(1);
    expect(fake.puts).toHaveLength(2);
    expect(fake.puts[1]?.baseVersion).toBe(7); // retried with the reloaded version
    expect(fake.answers['FA1']?.value).toBe(true);
    expect(session.version).toBe(8);
  });
});

describe('gap toggles and what-if overrides', () => {
  async function openSession(fake: FakeService) {
    fake.script.scoreLevels = [1];
    const session = makeSession(fake);
    await session.create('Test U');
    return session;
  }

  test('boolean gaps override to yes; toggling off removes them', async () => {
    const fake = new FakeService();
    const session = await openSession(fake);

    fake.script.whatIfLevels = [3, 1];
    await session.toggleGap('FA1', 3);
    expect(session.pendingOverrides()).toEqual({ FA1: true });
    expect(session.hypotheticalLevel()).toBe(3);
    expect(fake.lastOverrides).toEqual({ FA1: true });

    await session.toggleGap('FA1', 3);
    expect(session.pendingOverrides()).toEqual({});
    expect(session.hypotheticalLevel()).toBe(1);
  });

  test('degree toggles accumulate to the maximal needed word', async () => {
    const fake = new FakeService();
    const session = await openSession(fake);

    fake.script.whatIfLevels = [1, 1, 1];
    await session.toggleGap('FA6', 3);
    expect(session.pendingOverrides()).toEqual({ FA6: 'low' });
    await session.toggleGap('FA6', 4);
    expect(session.pendingOverrides()).toEqual({ FA6: 'medium' });
    await session.toggleGap('FA6', 3); // dropping the lower rank keeps medium
    expect(session.pendingOverrides()).toEqual({ FA6: 'medium' });
  });

  test('overrides go to the what-if route and never touch answers', async () => {
    const fake = new FakeService();
    const session = await openSession(fake);

    fake.script.whatIfLevels = [4];
    await session.toggleGap('FA4', 4);
    await session.toggleGap('FA6', 5);
    expect(fake.lastOverrides).toEqual({ FA4: true, FA6: 'high' });
    expect(fake.answers).toEqual({});
    expect(fake.puts).toHaveLength(0);
  });

  test('clearOverrides resets the hypothetical view', async () => {
    const fake = new FakeService();
    const session = await openSession(fake);
    fake.script.whatIfLevels = [5];
    await session.toggleGap('FA6', 5);
    expect(session.hypotheticalLevel()).toBe(5);
    session.clearOverrides();
    expect(session.hypotheticalLevel()).toBeNull();
    expect(session.pendingOverrides()).toEqual({});
  });
});
